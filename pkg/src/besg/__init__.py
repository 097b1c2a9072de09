"""String-graph and B-ESG graph-grammar engine.

The headline API, re-exported from the submodules:

- graphs and string graphs: ``LabelAlphabets``, ``Graph``, ``validate_graph``,
  ``classify``, ``minimal_representative``, ``wire_homeomorphic``,
  ``measures``, ``wsize``
- DPO rewriting: ``find_monomorphisms``, ``pushout``, ``pushout_complement``,
  ``make_rule``, ``validate_string_rewrite_rule``, ``rewrite_string_graph``
- grammars: ``ExtendedGraph``, ``Production``, ``EdnceGrammar``,
  ``substitute``, ``derive``, ``yield_of_tree``, ``classify_grammar``,
  ``compute_context_map``, ``normalize``
- B-ESG: ``DecodingRule``, ``DecodingSystem``, ``validate_decoding_system``,
  ``decode``, ``context_passing``, ``validate_besg``, ``enumerate_language``,
  ``decide_membership``, ``enumerate_monos``
- grammar rewriting: ``validate_rule``, ``rule_from_pattern``,
  ``find_saturated_matchings``, ``apply_rewrite``, ``instantiate_rule``,
  ``certify_admissibility``
- !-graphs: ``validate_bang_graph``, ``kill``, ``expand``, ``enumerate_bang``,
  ``classify_overlap``, ``bang_to_grammar``
"""

from .bang import (
    bang_to_grammar,
    classify_overlap,
    enumerate_bang,
    expand,
    kill,
    validate_bang_graph,
)
from .core import (
    Graph,
    LabelAlphabets,
    WSize,
    classify,
    measures,
    minimal_representative,
    validate_graph,
    wire_homeomorphic,
    wsize,
)
from .dpo import (
    GraphMorphism,
    GraphRewriteRule,
    find_monomorphisms,
    find_string_matchings,
    make_rule,
    pushout,
    pushout_complement,
    rewrite_string_graph,
    validate_string_rewrite_rule,
)
from .ednce import (
    CI,
    ConnectionInstruction,
    Derivation,
    EdnceGrammar,
    ExtendedGraph,
    Production,
    TreeNode,
    classify_grammar,
    compute_context_map,
    derive,
    enumerate_graphs,
    normalize,
    substitute,
    tree,
    yield_of_tree,
)
from .esg import (
    BesgGrammar,
    DecodingRule,
    DecodingSystem,
    context_passing,
    decide_membership,
    decode,
    enumerate_language,
    enumerate_monos,
    validate_besg,
    validate_decoding_system,
)
from .rewriting import (
    BesgRewriteRule,
    apply_rewrite,
    certify_admissibility,
    find_saturated_matchings,
    instantiate_correspondence,
    instantiate_rule,
    pattern_from_rule,
    rule_from_pattern,
    validate_rule,
)

__all__ = [name for name in dir() if not name.startswith("_")]
