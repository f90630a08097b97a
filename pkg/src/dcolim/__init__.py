"""Derived colimits and limits over finite categories, and Mayer–Vietoris checks for pushout squares."""

from .abelian import AbHom, FgAbGroup, IntMatrix, SparseMatrix, exactness_defect, homology_at, smith_normal_form
from .chains import ChainComplex, ChainMap, cone
from .dmod import (
    Diagram,
    bar_complex,
    cobar_complex,
    const_diagram,
    derived_colim,
    derived_lim,
    induced_map,
    left_kan,
    nerve_homology,
    restrict,
    tensor_over_category,
)
from .fincat import (
    BoundExceeded,
    FinCategory,
    Functor,
    PushoutSquare,
    cat_isomorphic,
    injective_on_objects,
    opposite,
    pi0,
    pushout,
    under_category,
    validate,
)
from .mv import (
    counterexample_repro,
    covering_check,
    local_covering_check,
    mv_predict,
    mv_verify,
    mv_verify_lim,
    theorem1_hypotheses,
)

__version__ = "0.1.0"
