"""Model checking ATL over concurrent game structures with roles."""
from .bridge import (
    Cgs, TranslationCapError, abstract, cgs_force_set, cgs_mcheck, concretize,
    singleton_roles, translate, verify_force_equality,
)
from .cgs import validate_cgs
from .checker import (
    StrategyLimitError, WorkTrace, enforce, force_set, mcheck, mcheck_naive,
)
from .core import (
    ModelError, Profile, Rcgs, Vote, enumerate_profiles, enumerate_votes, ext, extends,
    profile_count, successors, validate,
)
from .formula import BindError, FormulaSyntaxError, bind, parse_formula, to_text
from .modelfile import (
    ModelSyntaxError, ModelValidationError, parse_cgs, parse_model, serialize_cgs,
    serialize_model,
)
from .workbench import (
    SizeReport, degree_formula, gen_autonomous_trains, gen_train_controller, measure,
    random_model, size_report,
)

__version__ = "0.1.0"
