"""Figure rendering for page-migration experiment output files."""

from .render import FigureSpec, render_comparison, render_trajectory
from .svgcheck import SvgStructure, inspect_svg

__version__ = "0.1.0"
