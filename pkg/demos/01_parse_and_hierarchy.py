"""Parse N-Triples and walk the class hierarchy.

A small company ontology is parsed from an inline string; we then ask
the hierarchy for each class's coarse ancestor (the last class before a
root such as owl:Thing) and for the fine-grained candidate classes an
entity of that branch could be refined to.
"""

from kgtyper import KnowledgeGraph, build_hierarchy, fine_grained_candidates, parse_ntriples

DUMP = """\
<http://ex.org/class/LawFirm> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/class/Company> .
<http://ex.org/class/Company> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/class/Organisation> .
<http://ex.org/class/Organisation> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/class/Agent> .
<http://ex.org/class/Person> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/class/Agent> .
<http://ex.org/entity/Baker_McKenzie> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/class/LawFirm> .
<http://ex.org/entity/Baker_McKenzie> <http://ex.org/prop/location> <http://ex.org/entity/Chicago> .
"""

def short(iri) -> str:
    # Triple fields are Iri/Literal objects; graph queries return plain strings.
    return str(getattr(iri, "value", iri)).rsplit("/", 1)[-1]

triples = list(parse_ntriples(DUMP.splitlines()))
print(f"parsed {len(triples)} triples; first one:")
print(f"  {short(triples[0].subject)} --{short(triples[0].predicate)}--> {short(triples[0].object)}")

kg = KnowledgeGraph.from_triples(triples)
entities = {t.subject.value for t in kg.triples} - kg.classes()
print(f"\nentities: {sorted(short(e) for e in entities)}")
print(f"classes:  {sorted(short(c) for c in kg.classes())}")

hierarchy = build_hierarchy(kg, roots={"http://ex.org/class/Agent"})
print("\nwith Agent declared as the hierarchy root:")
for name in ("LawFirm", "Company", "Organisation", "Person"):
    iri = f"http://ex.org/class/{name}"
    print(f"  coarse_ancestor({name}) = {short(hierarchy.coarse_ancestor(iri))}")

candidates = fine_grained_candidates(hierarchy, "http://ex.org/class/LawFirm")
print(f"\nBaker_McKenzie is typed LawFirm, whose coarse ancestor is Organisation;")
print(f"its fine-grained candidate classes are {sorted(short(c) for c in candidates)}")
