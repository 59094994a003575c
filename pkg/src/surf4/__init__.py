"""Local differential geometry of surfaces in R^4: jets, fundamental forms,
principal directions, the tangent indicatrix and the curvature ellipse."""

from .jets import ParamPoint, Jet2, SurfaceChart, evaluate_jet
from .forms import point_data
from .classify import GridSpec, analyze_point, classify_surface

__version__ = "0.1.0"
