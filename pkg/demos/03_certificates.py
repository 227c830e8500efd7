"""Produce, serialize, verify and tamper with asphericity certificates.

    python demos/03_certificates.py
"""

from pathlib import Path

from lotva import (BoundaryReduction, CompleteSetRelative,
                   FreeDecompositionNode, PrimeWeightTest, certify_va,
                   parse_certificate, parse_lot, serialize_certificate,
                   verify_certificate)

FIXTURES = Path(__file__).parent.parent / "fixtures"


def describe(cert, depth=0):
    pad = "  " * depth
    if isinstance(cert, PrimeWeightTest):
        print(f"{pad}prime weight test, flip {sorted(cert.flipped) or 'nothing'}")
    elif isinstance(cert, BoundaryReduction):
        print(f"{pad}boundary reduction: drop edge {cert.edge_id} "
              f"at {cert.outer_vertex}")
        describe(cert.child, depth + 1)
    elif isinstance(cert, FreeDecompositionNode):
        print(f"{pad}free decomposition at {cert.shared_vertex}")
        describe(cert.left_child, depth + 1)
        describe(cert.right_child, depth + 1)
    elif isinstance(cert, CompleteSetRelative):
        print(f"{pad}complete set {[sorted(s) for s in cert.sublots]}, "
              f"flip {sorted(cert.flipped) or 'nothing'}")
        for c in cert.children:
            describe(c, depth + 1)
    else:
        print(f"{pad}trivial base")


for name in ("prime", "fig1", "fig3"):
    lot = parse_lot((FIXTURES / f"{name}.lot").read_text())
    cert = certify_va(lot)
    print(f"== certificate for {name} ==")
    describe(cert)
    verdict = verify_certificate(lot, cert)
    print(f"verifier: {'accepted' if verdict.accepted else 'rejected'}")
    print()

fig1 = parse_lot((FIXTURES / "fig1.lot").read_text())
cert = certify_va(fig1)
text = serialize_certificate(cert)
print("== serialized fig1 certificate ==")
print(text)

back = parse_certificate(text)
print("round-trips:", back == cert)

print("\n== tampering is caught by name ==")
bad = CompleteSetRelative(cert.sublots, cert.chain, frozenset({1}),
                          cert.pos_corners, cert.neg_corners, cert.children)
verdict = verify_certificate(fig1, bad)
print(f"flip an edge inside Gamma_1 -> rejected at: {verdict.failing_check}")
