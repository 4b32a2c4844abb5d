"""The fixed DAOnt/DPV/ODRL vocabulary, a minimal schema graph and optional
RDFS subclass/subproperty materialization.

The class and property hierarchy below is deliberately small: instances in
the contract corpus are directly typed, the built-in rule queries match
direct types only, and inference therefore defaults to OFF everywhere.
The subclass axioms are a reconstruction (the upstream ontology diagram is
not machine-readable here) and no query result may depend on them.
"""

from __future__ import annotations

from .rdf import Graph, Iri, Term, Triple
from .turtle import PrefixMap

DA = "https://w3id.org/def/daont#"
DPV = "https://w3id.org/dpv#"
ODRL = "http://www.w3.org/ns/odrl/2/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"


class Namespace:
    """Builds IRIs under a fixed namespace: Namespace(DA).DataHolder."""

    def __init__(self, base: str):
        self._base = base

    def term(self, local: str) -> Iri:
        return Iri(self._base + local)

    def __getattr__(self, local: str) -> Iri:
        if local.startswith("_"):
            raise AttributeError(local)
        return self.term(local)

    def __str__(self) -> str:
        return self._base


da = Namespace(DA)
dpv = Namespace(DPV)
odrl = Namespace(ODRL)
rdf = Namespace(RDF)
rdfs = Namespace(RDFS)
owl = Namespace(OWL)
xsd = Namespace(XSD)

RDF_TYPE = rdf.term("type")
RDFS_SUBCLASS = rdfs.term("subClassOf")
RDFS_SUBPROPERTY = rdfs.term("subPropertyOf")

# The 13 classes every rule query and fixture draws from.
CLASSES: tuple[Iri, ...] = (
    da.DataHolder,
    da.ConsumerUser,
    da.EnterpriseUser,
    da.DataRecipient,
    da.PublicSectorBody,
    da.Manufacturer,
    da.AftermarketServiceProvider,
    da.B2CDataSharing,
    da.B2BDataSharing,
    da.B2GDataSharing,
    da.DataProvision,
    da.UseDataToDevelopCompetingProduct,
    da.ExceptionalNeed,
)

# Abstract parents used only by the (optional) subclass axioms.
PARENT_CLASSES: tuple[Iri, ...] = (
    da.DataSharing,
    da.User,
    da.LegalAction,
    da.Action,
)

OBJECT_PROPERTIES: tuple[Iri, ...] = (
    da.governedBy,
    da.authorizedBy,
    da.ownsOrUses,
    da.requestsAccessTo,
    da.generatesData,
    da.performsLegalAction,
    da.performsAction,
    da.containsTradeSecret,
    dpv.hasRecipient,
    dpv.hasData,
)

BOOLEAN_PROPERTIES: tuple[Iri, ...] = (
    da.isFair,
    da.isReasonable,
    da.isNonDiscriminatory,
)

# Properties invented for this artifact; only the FRAND rule and the
# CQ exercise fixture touch them.
INVENTED_PROPERTIES: tuple[Iri, ...] = (
    da.hasFRANDTerms,
    da.manufacturedBy,
    da.providesService,
    da.appliesDuring,
)

DEONTIC_MARKERS: dict[str, Iri] = {
    "obligation": odrl.Duty,
    "permission": odrl.Permission,
    "prohibition": odrl.Prohibition,
}

SUBCLASS_AXIOMS: tuple[tuple[Iri, Iri], ...] = (
    (da.B2CDataSharing, da.DataSharing),
    (da.B2BDataSharing, da.DataSharing),
    (da.B2GDataSharing, da.DataSharing),
    (da.ConsumerUser, da.User),
    (da.EnterpriseUser, da.User),
    (da.DataProvision, da.LegalAction),
    (da.UseDataToDevelopCompetingProduct, da.Action),
)


def default_prefixes() -> PrefixMap:
    """Fresh prefix map with the vocabulary namespaces bound."""
    pm = PrefixMap()
    pm.bind("da", DA)
    pm.bind("dpv", DPV)
    pm.bind("odrl", ODRL)
    pm.bind("rdf", RDF)
    pm.bind("rdfs", RDFS)
    pm.bind("owl", OWL)
    pm.bind("xsd", XSD)
    return pm


class SchemaCycleError(ValueError):
    """The subclass/subproperty axiom set contains a cycle."""


_SCHEMA: Graph | None = None


def schema_graph() -> Graph:
    """The constant schema graph: class/property declarations plus the
    subclass axioms. The same frozen instance is returned on every call."""
    global _SCHEMA
    if _SCHEMA is None:
        g = Graph(label="daont-schema")
        for cls in CLASSES + PARENT_CLASSES:
            g.insert(Triple(cls, RDF_TYPE, owl.Class))
        for prop in OBJECT_PROPERTIES + INVENTED_PROPERTIES:
            g.insert(Triple(prop, RDF_TYPE, owl.ObjectProperty))
        for prop in BOOLEAN_PROPERTIES:
            g.insert(Triple(prop, RDF_TYPE, owl.DatatypeProperty))
        for child, parent in SUBCLASS_AXIOMS:
            g.insert(Triple(child, RDFS_SUBCLASS, parent))
        _SCHEMA = g.freeze()
    return _SCHEMA


def _transitive_parents(edges: dict[Iri, set[Iri]]) -> dict[Iri, set[Iri]]:
    """All ancestors per node; raises SchemaCycleError on a cycle."""
    result: dict[Iri, set[Iri]] = {}

    def walk(node: Iri, trail: tuple[Iri, ...]) -> set[Iri]:
        if node in trail:
            cycle = " -> ".join(t.value for t in trail + (node,))
            raise SchemaCycleError(f"hierarchy cycle: {cycle}")
        if node in result:
            return result[node]
        parents: set[Iri] = set()
        for parent in edges.get(node, ()):
            parents.add(parent)
            parents |= walk(parent, trail + (node,))
        result[node] = parents
        return parents

    for node in list(edges):
        walk(node, ())
    return result


def rdfs_closure(instances: Graph, schema: Graph | None = None) -> Graph:
    """Instance graph extended with derived rdf:type and lifted property
    triples under the schema's subclass/subproperty axioms.

    Monotone and idempotent; the input graphs are not modified.
    """
    if schema is None:
        schema = schema_graph()

    def edge_map(predicate: Iri) -> dict[Iri, set[Iri]]:
        edges: dict[Iri, set[Iri]] = {}
        for t in schema.match(None, predicate, None):
            if isinstance(t.subject, Iri) and isinstance(t.object, Iri):
                edges.setdefault(t.subject, set()).add(t.object)
        return edges

    superclasses = _transitive_parents(edge_map(RDFS_SUBCLASS))
    superproperties = _transitive_parents(edge_map(RDFS_SUBPROPERTY))

    out = instances.copy()
    changed = True
    while changed:  # fixpoint; settles in one pass unless lifting feeds typing
        changed = False
        for t in list(out):
            if t.predicate == RDF_TYPE and isinstance(t.object, Iri):
                for ancestor in superclasses.get(t.object, ()):
                    changed |= out.insert(Triple(t.subject, RDF_TYPE, ancestor))
            for lifted in superproperties.get(t.predicate, ()):
                changed |= out.insert(Triple(t.subject, lifted, t.object))
    return out
