"""Bundled preset scenarios, one per reproduced experiment."""

from __future__ import annotations

from importlib import resources

PRESET_NAMES = (
    "baseline", "fig2a_nep", "fig2b_raman", "fig2c_adc", "fig3_rin",
    "fig4_sweeps", "fig5_filter", "fig6_phase", "sec6_key",
)


def preset_text(name: str) -> str:
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    ref = resources.files(__package__) / "presets" / f"{name}.scn"
    return ref.read_text()
