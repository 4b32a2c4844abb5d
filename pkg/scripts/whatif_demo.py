#!/usr/bin/env python3
"""What-if loop demo: the B2C violation is cleared by asserting the missing
data-provision facts and comes back when they are retracted.

Usage: python3 scripts/whatif_demo.py
"""

from __future__ import annotations

from daont_verify.engine import Session
from daont_verify.rdf import Iri, Triple
from daont_verify.vocab import RDF_TYPE, da

NS = "http://example.org/b2c-violation#"
PROVISION = [
    Triple(Iri(NS + "watchManufacturer"), da.performsLegalAction,
           Iri(NS + "provision_whatif")),
    Triple(Iri(NS + "provision_whatif"), RDF_TYPE, da.DataProvision),
]


def show(session: Session, note: str) -> None:
    report = session.run_check("demo", ["R-4-1"])
    entry = report.result_for("R-4-1")
    print(f"v{report.graph_version} {note:<36} R-4-1: {entry.status}")
    for violation in entry.violations:
        print(f"    {violation.message}")


def main() -> None:
    session = Session()
    session.load_fixtures(["b2c-violation"], "demo")
    show(session, "loaded b2c-violation")

    session.apply_whatif("demo", add=PROVISION)
    show(session, "asserted DataProvision facts")

    session.apply_whatif("demo", remove=PROVISION)
    show(session, "retracted them again")


if __name__ == "__main__":
    main()
