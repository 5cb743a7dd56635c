from .grid import (
    GridNetwork,
    GridSpec,
    auto_vertical,
    catalyst,
    gate,
    gen_grid,
    grid_catalyzed_path,
    horizontal,
    vertical,
)
from .translator import (
    ExposedSizeReport,
    OffsetDiagnostics,
    TranslatorNetwork,
    TranslatorSpec,
    all_perfect_matchings,
    bottom,
    configuration_offset,
    exposed_size_check,
    find_cutoff,
    gen_translator,
    is_normal_form,
    n_prime,
    offset_diagnostics,
    pair_compatible,
    pair_offset,
    perfect_matching,
    sort_matching,
    top,
    translator_catalyzed_path,
    translator_cheat_path,
)
