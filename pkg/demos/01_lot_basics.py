"""Walk through the LOT-level structure theory on the bundled fixtures.

Run from the repository root after ``pip install -e .``:

    python demos/01_lot_basics.py
"""

from pathlib import Path

from lotva import (check_properties, collapse, complete_set_search,
                   enumerate_sublots, free_decomposition, parse_lot,
                   sublot_closure, sublot_vertices)

FIXTURES = Path(__file__).parent.parent / "fixtures"


def show(title):
    print()
    print(f"== {title} " + "=" * max(0, 60 - len(title)))


fig1 = parse_lot((FIXTURES / "fig1.lot").read_text())
fig3 = parse_lot((FIXTURES / "fig3.lot").read_text())
prime = parse_lot((FIXTURES / "prime.lot").read_text())

show("property reports")
for lot in (fig1, fig3, prime):
    rep = check_properties(lot)
    print(f"{lot.name:>6}: injective={rep.injective} compressed={rep.compressed} "
          f"reduced={rep.reduced} prime={rep.prime}")

show("sub-LOTs of fig1")
all_subs, maximal = enumerate_sublots(fig1)
for s in all_subs:
    vs = ",".join(sorted(sublot_vertices(fig1, s)))
    tag = " (maximal proper)" if s in maximal else ""
    print(f"  edges {sorted(s)}  vertices {{{vs}}}{tag}")

show("closures grow to the label-closed subtree")
print("  closure of edge 3 (c-d labeled b):", sorted(sublot_closure(fig1, 3)))
print("  closure of edge 0 (g-a labeled f):", sorted(sublot_closure(fig1, 0)),
      " <- the whole tree, so edge 0 is in no proper sub-LOT")

show("collapsing the maximal sub-LOT of fig1")
quotient, x = collapse(fig1, maximal[0])
print(f"  collapse vertex: {x}")
print("  quotient edges:",
      [(e.tail, e.head, e.label) for e in quotient.edges])
print("  quotient properties:", check_properties(quotient))

show("complete sets")
found = complete_set_search(fig1)
sublots, chain = found
print(f"  fig1 has the complete set {[sorted(s) for s in sublots]} "
      f"reaching a {chain.final_quotient.num_edges}-edge prime quotient")
print("  fig3:", complete_set_search(fig3),
      " <- no choice of maximal sub-LOTs ends compressed")

show("free decompositions")
print("  fig1:", free_decomposition(fig1))
fd = free_decomposition(fig3)
print(f"  fig3 splits at {fd.shared_vertex}: left {sorted(fd.left_edges)}, "
      f"right {sorted(fd.right_edges)}")
