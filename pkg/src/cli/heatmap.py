"""
Heatmap SVG de la media final de c sobre la rejilla del barrido
"""

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from src.cli.outputs import atomic_write  # noqa: E402
from src.sweep.sweep_engine import SweepResult  # noqa: E402

COLORMAP = "RdBu"
SVG_HASH_SALT = "actuation-heatmap"


def _tick_labels(values) -> list:
    return [f"{v:g}" if isinstance(v, (int, float)) and not isinstance(v, bool) else str(v) for v in values]


def render_heatmap(result: SweepResult, path: str, title: str = "") -> str:
    """
    Dibuja la rejilla (eje 1 en vertical, eje 2 en horizontal) con la escala
    de color fija en [mu_i, mu_a] y leyenda incluida

    Args:
        result: Resultado de run_sweep
        path: Ruta del SVG
        title: Título opcional

    Returns:
        Ruta escrita
    """
    spec = result.spec
    lex = spec.base.lex
    grid = result.value_grid()

    if len(spec.axes) == 2:
        (y_name, y_values), (x_name, x_values) = spec.axes
    else:
        (x_name, x_values), = spec.axes
        y_name, y_values = "", ("",)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(x_values) + 2.5), max(2.5, 0.35 * len(y_values) + 2.0)))
        mesh = ax.pcolormesh(np.arange(len(x_values) + 1), np.arange(len(y_values) + 1), grid,
                             cmap=COLORMAP, vmin=lex.mu_i, vmax=lex.mu_a, shading="flat")
        ax.set_xticks(np.arange(len(x_values)) + 0.5)
        ax.set_xticklabels(_tick_labels(x_values), rotation=90 if len(x_values) > 8 else 0)
        ax.set_yticks(np.arange(len(y_values)) + 0.5)
        ax.set_yticklabels(_tick_labels(y_values))
        ax.set_xlabel(x_name)
        ax.set_ylabel(y_name)
        if title:
            ax.set_title(title)
        cbar = fig.colorbar(mesh, ax=ax)
        cbar.set_label("final mean c (Hz)")
        fig.tight_layout()

        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)

    return atomic_write(path, buffer.getvalue())
