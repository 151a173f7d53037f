"""Figure-reproduction presets for the command line.

The published plots do not state their grid ranges numerically, so each
preset uses a range wide enough to contain every described feature:

======  =========  ====================================================
preset  model      choices
======  =========  ====================================================
fig1    asym_qrm   w0 = 1, eps = 0.01, g in [0, 3] (covers all three
                   coupling regimes), levels 1-8, n_trunc 400
fig2    asym_qrm   same scan as fig1 with one extra level so the gap
                   above level 8 is present in the table
fig3    asym_qrm   eps = 0.1, (w0, g) plane [0, 3] x [0, 3] at 41 x 41,
                   levels 1-7, n_trunc 200
fig4    asym_qrm   w0 = 1, (eps, g) plane [0, 4] x [0, 4] at 81 x 41,
                   levels 1-8, n_trunc 200
fig5    asym_qrm   w0 = 1, g = 3, eps in [0, 4] (the eight avoided
                   crossings of level 8 sit at 0, 0.5, ..., 3.5),
                   levels 1-9, n_trunc 400
fig7    asym_qjc   w0 = 1.5 (detuning 0.5), eps = 0.05, g in [0.1, 0.5]
                   around the dressed-state degeneracy at g = 0.2749,
                   levels 1-8, n_trunc 80
======  =========  ====================================================

All presets keep omega = 1 as the unit of energy.  The ``--trunc``,
``--points`` and ``--jobs`` flags of ``reproduce`` override a preset for
quick smoke runs.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Preset:
    model_tag: str
    omega0: float
    g: float
    epsilon: float
    axes: tuple
    grids: tuple  # per axis: (min, max, count)
    n_levels: int
    n_trunc: int


PRESETS = {
    "fig1": Preset(
        model_tag="asym_qrm",
        omega0=1.0,
        g=0.0,
        epsilon=0.01,
        axes=("g",),
        grids=((0.0, 3.0, 201),),
        n_levels=8,
        n_trunc=400,
    ),
    "fig2": Preset(
        model_tag="asym_qrm",
        omega0=1.0,
        g=0.0,
        epsilon=0.01,
        axes=("g",),
        grids=((0.0, 3.0, 201),),
        n_levels=9,
        n_trunc=400,
    ),
    "fig3": Preset(
        model_tag="asym_qrm",
        omega0=0.0,
        g=0.0,
        epsilon=0.1,
        axes=("omega0", "g"),
        grids=((0.0, 3.0, 41), (0.0, 3.0, 41)),
        n_levels=7,
        n_trunc=200,
    ),
    "fig4": Preset(
        model_tag="asym_qrm",
        omega0=1.0,
        g=0.0,
        epsilon=0.0,
        axes=("epsilon", "g"),
        grids=((0.0, 4.0, 81), (0.0, 4.0, 41)),
        n_levels=8,
        n_trunc=200,
    ),
    "fig5": Preset(
        model_tag="asym_qrm",
        omega0=1.0,
        g=3.0,
        epsilon=0.0,
        axes=("epsilon",),
        grids=((0.0, 4.0, 201),),
        n_levels=9,
        n_trunc=400,
    ),
    "fig7": Preset(
        model_tag="asym_qjc",
        omega0=1.5,
        g=0.0,
        epsilon=0.05,
        axes=("g",),
        grids=((0.1, 0.5, 201),),
        n_levels=8,
        n_trunc=80,
    ),
}
