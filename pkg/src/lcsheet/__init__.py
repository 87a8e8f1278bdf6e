"""Lightcone geometry of spacelike world sheets in Lorentz-Minkowski space."""
from .errors import (ConfigError, DegeneracyError, DomainError, EvaluationError,
                     InputError, LightconeError, ParseError, PreconditionError)
from .minkowski import (CausalClass, LightlikeHyperplane, causal_class, pseudo_product,
                        project_to_lightcone_sphere, wedge)
from .worldsheet import WorldSheetSpec, evaluate, validate
from .frames import NormalFrame, SphereAngles, normal_frame
from .curvature import CurvatureData, curvature_at
from .fixtures import fixture

__version__ = "0.1.0"
