"""Model checking for modal dependence logic with arbitrary Boolean connectives."""

from .clones import (
    CloneLabel,
    FragmentSignature,
    classify_by_closure,
    classify_clone,
    classify_function,
    closure_oracle,
    fragment_complexity,
    fragment_signature,
    join,
)
from .formula import (
    AND,
    BOT,
    BUILTINS,
    NOT,
    OR,
    TOP,
    XOR,
    Apply,
    BooleanFunction,
    Box,
    BoxDot,
    Dep,
    Diamond,
    FormulaSyntaxError,
    NegProp,
    Prop,
    eval_function,
    load_functions,
    parse_formula,
    render_formula,
)
from .kripke import KripkeModel, ModelError, load_model, save_model, successor_teams, successors
from .limits import ResourceLimitError
from .normalform import normalize_n_clone
from .reductions import (
    CnfInstance,
    Digraph,
    GeneratedInstance,
    QbfInstance,
    gen_qbf,
    gen_reach,
    gen_sat,
    oracle_qbf,
    oracle_reach,
    oracle_sat,
    verify_reduction,
)
from .semantics import (
    EvalResult,
    check,
    check_reference,
    eval_dep,
    is_downward_closed_semantic,
    is_downward_closed_syntactic,
)

__version__ = "0.1.0"
