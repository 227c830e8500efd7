"""Surface diagrams: pillows, the torus, curvature and sinks.

    python demos/04_surface_diagrams.py
"""

from fractions import Fraction
from pathlib import Path

from lotva import (DegenerateDiagramError, WeightAssignment, build_complex,
                   build_link, canonical_weights, curvature_report,
                   double_cell_sphere, find_folding_vertices, find_sink_source,
                   format_diagram, is_vertex_reduced, parse_complex,
                   parse_diagram, parse_lot, validate_diagram,
                   vertex_link_cycle)

FIXTURES = Path(__file__).parent.parent / "fixtures"

prime = parse_lot((FIXTURES / "prime.lot").read_text())
cx = build_complex(prime)

print("== the pillow: a cell doubled across its boundary ==")
pillow = double_cell_sphere(cx, "d_0")
print(format_diagram(pillow))
rep = validate_diagram(pillow, cx)
print(f"valid: {rep.valid}, chi = {rep.chi}, sphere = {rep.sphere}")

z = vertex_link_cycle(pillow, "v0", cx)
print(f"z(v0) = {z.corners}  <- a corner followed by its own reversal")
print("folding vertices:", find_folding_vertices(pillow, cx))
print("vertex reduced:", is_vertex_reduced(pillow, cx))

g = build_link(cx)
cr = curvature_report(pillow, cx, canonical_weights(g))
print(f"curvature: faces {dict(cr.face_curvature)}, total {cr.total} = 2*chi")

sink, source, h = find_sink_source(pillow, cx)
print(f"heights {h}: sink {sink}, source {source}")

print("\n== the torus: vertex reduced, so not a sphere's witness ==")
square = parse_complex((FIXTURES / "square.cplx").read_text())
torus = parse_diagram((FIXTURES / "torus.diag").read_text())
rep = validate_diagram(torus, square)
print(f"valid: {rep.valid}, chi = {rep.chi}, genus = {rep.genus}")
print("folding vertices:", find_folding_vertices(torus, square))

tg = build_link(square)
third = WeightAssignment({c.id: Fraction(1, 3) for c in tg.corners})
cr = curvature_report(torus, square, third)
print(f"with weight 1/3 everywhere: face curvature "
      f"{dict(cr.face_curvature)}, vertex curvature "
      f"{dict(cr.vertex_curvature)}, total {cr.total} = 2*chi")

try:
    find_sink_source(torus, square)
except DegenerateDiagramError as exc:
    print(f"sink/source on the torus: {exc.code} "
          "(single vertex, every edge enters and leaves)")
