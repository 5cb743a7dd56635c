"""Exact kinetic barriers for thermodynamic binding networks."""
from .kinetics import (
    MergeKind,
    Move,
    Path,
    PathError,
    UnsupportedRegime,
    apply_move,
    bind_first_decompose,
    bind_first_paths,
    classify_merge,
    height,
    infer_move,
    invert_move,
    neighbors,
    saturate_path,
    split_parts,
)
from .model import (
    TBN,
    Configuration,
    Energy,
    Monomer,
    Polymer,
    SiteType,
    TBNError,
    as_w,
    bond_count,
    canonicalize,
    compatible,
    energy,
    exposed_sites,
    is_saturated,
)
from .search import (
    BarrierResult,
    SearchBudget,
    StabilityResult,
    barrier,
    barrier_map,
    saturated_equals_unrestricted_check,
    self_stabilize,
    iter_configurations,
    stable_configurations,
)
from .bonds import (
    BondConfiguration,
    BondMove,
    BondPath,
    BondPolymer,
    all_bond_configurations,
    bond_barrier,
    bond_barrier_map,
    bond_energy,
    bond_neighbors,
    simplify,
)
from .physical import PhysicalParams, gibbs_energy
from .textio import TbnDocument, TBNParseError, parse_tbn, render_tbn
from .cli import cli_main

__version__ = "0.1.0"
