"""Bounds on the erasure-only capacity of discrete memoryless channels.

A channel used with a decoder that never guesses (it declares a message
only when exactly one message could have produced the received word, and
erases otherwise) has a capacity governed by the confusability structure
of its zero pattern.  This package computes exact finite-blocklength
confusability-graph numbers, single- and multi-letter capacity bounds,
and decoder statistics, plus a small CLI tying them together.
"""

from .channel import (
    Channel,
    InputPMF,
    bipartite_acyclic,
    canonical_channel,
    channel_graph,
    epsilon_of,
    factorize,
    feedback_zue,
    format_channel,
    load_channel,
    merge_outputs,
    product_channel,
    shannon_capacity,
    validate,
    zue_positive,
)
from .digraph import (
    DirectedGraph,
    complement,
    degrees,
    format_graph,
    graphs_equal,
    index_to_word,
    induced_subgraph,
    is_acyclic,
    parse_graph,
    strong_power,
    strong_product,
    strongly_connected_components,
    topological_order,
    weak_power,
    weak_product,
    word_to_index,
)
from .bounds import (
    BoundEntry,
    BoundReport,
    ReportOptions,
    composite_report,
    effective_output_count,
    epsilon_noise_upper,
    forney_multiletter_uniform,
    forney_single_letter,
    hui_bound,
    hui_bound_two_letter,
    ratio_bound_check,
    sperner_code_lower,
)
from .errors import (
    CapExceededError,
    ConvergenceError,
    FormatError,
    ZuecapError,
)
from .gsolve import (
    SpernerEstimate,
    SpernerRow,
    acyclic_set_from_order,
    caro_wei_sum,
    max_acyclic_induced,
    max_independent_set,
    random_order_acyclic_mean,
    sperner_report,
    symmetric_clique,
    transitive_clique,
    weight_partition_independent_set,
)
from .zuedec import (
    Codebook,
    erasure_probability_avg,
    erasure_probability_exact,
    erasure_probability_max,
    erasure_probability_mc,
    format_codebook,
    is_sperner_code,
    list_size,
    listsize_moment,
    listsize_moment_avg,
    load_codebook,
)

__version__ = "0.1.0"
