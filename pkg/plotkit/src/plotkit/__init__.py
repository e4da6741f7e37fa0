"""Figure rendering for specsense regret-curve CSV files."""

from .render import REQUIRED_HEADER, FigureSpec, load_curve, render_figures

__version__ = "0.1.0"
