"""Small hand-built fixtures for enrichment and alignment tests."""

from bcintegrate.model import Concept, Ontology, RelationKind, SemanticRelation

SYN = RelationKind.SYNONYMY
EQ = RelationKind.EQUIVALENCE
HOM = RelationKind.HOMONYMY
PART = RelationKind.PART_OF


def ontology(name, concepts, relations=(), origin=None):
    """``concepts`` maps a short key to a term (or ``(term, id)``); relation
    endpoints use the keys. Returns ``(ontology, {key: id})``."""
    onto = Ontology(name)
    ids = {}
    for key, spec in concepts.items():
        term, cid = spec if isinstance(spec, tuple) else (spec, f"{name}#{key}")
        onto.add_concept(Concept(cid, term, origin or name))
        ids[key] = cid
    for kind, a, b in relations:
        onto.add_relation(SemanticRelation(kind, ids[a], ids[b]))
    return onto, ids


def agent_fixture():
    """Same-term concepts in two components that the domain keeps apart."""
    domain, d = ontology("OD", {
        "sales": "Sales", "software": "Software",
        "agent-sales": ("Agent", "OD#agent-sales"),
        "agent-software": ("Agent", "OD#agent-software"),
    }, [(PART, "agent-sales", "sales"), (PART, "agent-software", "software"),
        (HOM, "agent-sales", "agent-software")], origin="domain")
    ca, a = ontology("OA", {"sales": "Sales", "agent": "Agent", "invoice": "Invoice"},
                     [(PART, "agent", "sales"), (PART, "invoice", "sales")])
    cb, b = ontology("OB", {"software": "Software", "agent": "Agent", "licence": "Licence"},
                     [(PART, "agent", "software"), (PART, "licence", "software")])
    return domain, [ca, cb], d, a, b


def depot_fixture():
    """Two concepts each declared synonymous with a distinct 'Depot'."""
    domain, d = ontology("OD", {
        "storehouse": "Storehouse", "warehouse": "Warehouse",
        "depot-a": ("Depot", "OD#depot-a"), "depot-b": ("Depot", "OD#depot-b"),
    }, [(SYN, "storehouse", "depot-a"), (SYN, "warehouse", "depot-b")], origin="domain")
    ca, a = ontology("OA", {"storehouse": "Storehouse"})
    cb, b = ontology("OB", {"warehouse": "Warehouse"})
    return domain, [ca, cb], d, a, b


def chain_fixture():
    """X and Y become synonymous by their children; P and Q only follow
    from that through their declared equivalents, one round later."""
    domain, d = ontology("OD", {
        "p": "P", "q": "Q", "x": "X", "y": "Y", "k1": "K1", "k2": "K2",
    }, [(SYN, "p", "x"), (SYN, "q", "y"), (SYN, "k1", "k2")], origin="domain")
    ca, a = ontology("OC1", {"p": "P", "x": "X", "k1": "K1"}, [(PART, "k1", "x")])
    cb, b = ontology("OC2", {"q": "Q", "y": "Y", "k2": "K2"}, [(PART, "k2", "y")])
    return domain, [ca, cb], d, a, b


def local_equivalence_fixture():
    """Laboratory/Workshop declared equivalent inside a component; the
    children would also match."""
    domain, d = ontology("OD", {"lab": "Laboratory", "ws": "Workshop", "rt": "Research Team"},
                         origin="domain")
    ca, a = ontology("OA", {"lab": "Laboratory", "ws": "Workshop", "rt": "Research Team"},
                     [(EQ, "lab", "ws"), (PART, "rt", "lab")])
    cb, b = ontology("OB", {"ws": "Workshop", "rt": "Research Team"}, [(PART, "rt", "ws")])
    return domain, [ca, cb], d, a, b
