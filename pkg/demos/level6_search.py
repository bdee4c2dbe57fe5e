"""Unexplained (2,3)-entanglements at level 6: the search, then a look at the maximal groups."""
from entanglement_atlas.catalog import load_rank_facts
from entanglement_atlas.entangle import entanglement_report, primitivity_check
from entanglement_atlas.gl2 import ResidueMatrix, generate_group
from entanglement_atlas.pipeline import run_pipeline
from entanglement_atlas.report import emit_report

# %% run the whole chain: Goursat candidates, admissibility, genus, classification, maximality
report = run_pipeline(6, genus_bound=1, rank_facts=load_rank_facts())
print(emit_report(report, "text").decode())

# %% one of the maximal Z/2 groups by hand
G = generate_group([ResidueMatrix.of(6, m) for m in [(2, 5, 3, 2), (1, 3, 3, 2)]], 6)
rep = entanglement_report(G, 2, 3)
print("order", G.order, "type", rep.type_string, "explained", rep.explained)
print("det index", rep.det_index, "group index", rep.group_index)
print("primitive", primitivity_check(G).primitive)
