"""Load ``compare`` manifests and panel CSVs and render the 4x2 figure.

The input schema is exactly what the simulator's ``compare`` subcommand
writes: a ``manifest.yaml`` mapping panel labels a-h to CSV files, and
per-panel CSVs with a ``time_ps`` column plus ``rho_{i}_{j}_re`` /
``rho_{i}_{j}_im`` columns for the upper triangle of the density matrix.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import yaml

PANEL_LABELS = ("a", "b", "c", "d", "e", "f", "g", "h")


class SchemaError(Exception):
    """The CSV or manifest does not match the documented schema."""


@dataclass(frozen=True)
class PanelData:
    """One panel's trajectory: sample times and the full density matrices."""

    times: np.ndarray          # (n_samples,) float
    states: np.ndarray         # (n_samples, dim, dim) complex

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def populations(self) -> np.ndarray:
        return np.real(np.einsum("tii->ti", self.states))

    def coherence_magnitude(self, i: int, j: int) -> np.ndarray:
        return np.abs(self.states[:, i, j])


def load_panel_csv(path) -> PanelData:
    """Parse one trajectory CSV, validating the column schema strictly."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
    names = header.split(",")
    if names[0] != "time_ps":
        raise SchemaError(f"{path.name}: first column must be 'time_ps', got {names[0]!r}")

    # infer the dimension from the diagonal real-part columns
    dim = 0
    while f"rho_{dim}_{dim}_re" in names:
        dim += 1
    if dim == 0:
        raise SchemaError(f"{path.name}: no 'rho_0_0_re' column found")
    expected = ["time_ps"]
    for i in range(dim):
        for j in range(i, dim):
            expected.append(f"rho_{i}_{j}_re")
            expected.append(f"rho_{i}_{j}_im")
    missing = [c for c in expected if c not in names]
    extra = [c for c in names if c not in expected]
    if missing or extra:
        raise SchemaError(
            f"{path.name}: column mismatch for dim={dim}; "
            f"missing {missing or 'none'}, unexpected {extra or 'none'}"
        )

    data = np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=1))
    if data.shape[1] != len(expected):
        raise SchemaError(f"{path.name}: {data.shape[1]} data columns, expected {len(expected)}")
    col = {name: data[:, k] for k, name in enumerate(names)}
    n = data.shape[0]
    states = np.zeros((n, dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(i, dim):
            z = col[f"rho_{i}_{j}_re"] + 1j * col[f"rho_{i}_{j}_im"]
            states[:, i, j] = z
            if i != j:
                states[:, j, i] = z.conj()
    return PanelData(times=col["time_ps"], states=states)


def load_manifest(manifest_path) -> dict:
    manifest_path = Path(manifest_path)
    manifest = yaml.safe_load(manifest_path.read_text())
    if not isinstance(manifest, dict) or "panels" not in manifest:
        raise SchemaError(f"{manifest_path.name}: expected a mapping with a 'panels' key")
    return manifest


def _panel_title(label: str, entry: dict) -> str:
    form = entry.get("form", "?")
    mode = "secular" if entry.get("secular") else "non-secular"
    variant = entry.get("variant", "?")
    return f"({label}) {form}, {mode}, {variant}"


def build_figure(manifest_path, coherences=None):
    """Build the 4x2 comparison figure.

    Returns ``(fig, statuses)`` where ``statuses`` maps each panel label to
    ``"ok"`` or a ``"missing: ..."`` description. Schema violations in a
    present CSV raise :class:`SchemaError` rather than misplotting.
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    panels = manifest["panels"]
    base = manifest_path.parent

    fig, axes = plt.subplots(4, 2, figsize=(9, 12), sharex=False)
    fig.suptitle(f"model: {manifest.get('model', '?')}")
    statuses: dict = {}
    for ax, label in zip(axes.ravel(), PANEL_LABELS):
        entry = panels.get(label)
        reason = None
        if entry is None:
            reason = "no manifest entry"
        elif "error" in entry:
            reason = f"run failed: {entry['error']}"
        elif "file" not in entry:
            reason = "no file recorded"
        elif not (base / entry["file"]).is_file():
            reason = f"file not found: {entry['file']}"
        if reason is not None:
            statuses[label] = f"missing: {reason}"
            ax.set_title(f"({label}) missing")
            ax.text(0.5, 0.5, f"panel {label}\n{reason}", ha="center", va="center",
                    transform=ax.transAxes, color="crimson")
            ax.set_xticks([])
            ax.set_yticks([])
            continue

        data = load_panel_csv(base / entry["file"])
        pops = data.populations()
        for i in range(data.dim):
            ax.plot(data.times, pops[:, i], label=rf"$\rho_{{{i}{i}}}$")
        if coherences is not None:
            i, j = sorted(int(k) for k in coherences)
            if j >= data.dim:
                raise SchemaError(f"coherence index {j} out of range for dim={data.dim}")
            ax.plot(data.times, data.coherence_magnitude(i, j), linestyle="--",
                    label=rf"$|\rho_{{{i}{j}}}|$")
        ax.set_title(_panel_title(label, entry))
        ax.set_xlabel("time (ps)")
        ax.set_ylabel("population")
        ax.legend(fontsize="x-small", ncol=2)
        statuses[label] = "ok"

    fig.tight_layout(rect=(0, 0, 1, 0.97))
    return fig, statuses


def render_compare(manifest_path, out_path, coherences=None) -> dict:
    """Render the figure to ``out_path`` and return the per-panel statuses."""
    fig, statuses = build_figure(manifest_path, coherences=coherences)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return statuses
