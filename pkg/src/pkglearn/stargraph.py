"""Star-shaped person-centric graphs and their canonical text serialization.

One graph per admission: a central patient node with one leaf per facet
value, linked through the schema's relation vocabulary.  Graphs serialize
to a canonical N-Triples subset (sorted lines, percent-encoded IRIs under
a fixed namespace, quoted literals) so equal triple sets produce equal
bytes.  Node IRIs are self-describing (``<ns>node/<facet>/<description>``),
which lets the parser rebuild facet categories and descriptions without
side tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

from .cohort import AdmissionRecord
from .exceptions import NTriplesParseError, SerializationError, ValidationError

NAMESPACE = "http://example.org/hspo/"

V1_RELATIONS = (
    "hasDisease", "hasIntervention", "hasSocialContext", "hasRaceOrEthnicity",
    "followsReligion", "hasGender", "hasMaritalStatus", "hasAge",
)
V2_RELATIONS = ("hasDisease", "hasIntervention", "hasSocialContext", "hasDemographics")
V3_RELATIONS = ("has",)
AGE_PROPERTY = "age_in_years"

FACETS = frozenset({
    "disease", "medication", "procedure", "social", "race_ethnicity",
    "religion", "gender", "marital", "age", "group", "patient",
})

# Demographic facets are the ones grouped under hasDemographics.
DEMOGRAPHIC_FACETS = frozenset({"race_ethnicity", "religion", "gender", "marital", "age"})

FACET_RELATION = {
    "disease": "hasDisease",
    "medication": "hasIntervention",
    "procedure": "hasIntervention",
    "social": "hasSocialContext",
    "race_ethnicity": "hasRaceOrEthnicity",
    "religion": "followsReligion",
    "gender": "hasGender",
    "marital": "hasMaritalStatus",
    "age": "hasAge",
}


@dataclass(frozen=True)
class HspoSchema:
    """Relation and data-property vocabulary used as the graph schema."""

    relations: tuple = V1_RELATIONS + ("hasDemographics", "has")
    data_properties: tuple = (AGE_PROPERTY,)


DEFAULT_SCHEMA = HspoSchema()


@dataclass(frozen=True, order=True)
class Triple:
    subject: str
    predicate: str
    obj: str
    obj_is_literal: bool = False


@dataclass
class TripleGraph:
    """Immutable-after-build star graph for one admission.

    ``node_meta`` maps node id -> (facet category, textual description).
    ``label`` is pipeline provenance, not part of the triple set; it is
    not serialized and must be reattached after parsing.
    """

    patient_node: str
    triples: list = field(default_factory=list)
    node_meta: dict = field(default_factory=dict)
    label: bool | None = None


def age_bucket(age_years: int) -> str:
    lo = (int(age_years) // 10) * 10
    return f"{lo}-{lo + 9}"


def build_pkg(record: AdmissionRecord, schema: HspoSchema = DEFAULT_SCHEMA) -> TripleGraph:
    """Build the star graph of one labeled, family-grouped admission record.

    Each present facet value becomes one leaf linked to the patient node;
    absent facets produce no triples.  The age facet is always present: a
    decade-bucket node carrying the exact age as a data property.
    """
    if record.readmitted_within_window is None:
        raise ValidationError(f"{record.admission_id}: record lacks a readmission label")

    patient = f"patient/{record.admission_id}"
    triples = []
    meta = {patient: ("patient", "patient")}

    def link(facet: str, description: str):
        node = f"{facet}/{description}"
        meta[node] = (facet, description)
        triples.append(Triple(patient, FACET_RELATION[facet], node))
        return node

    for _, desc in record.diagnoses:
        link("disease", desc)
    for name in record.medications:
        link("medication", name)
    for _, desc in record.procedures:
        link("procedure", desc)
    for value in (record.employment, record.housing, record.household):
        if value is not None:
            link("social", value)
    if record.ethnicity is not None:
        link("race_ethnicity", record.ethnicity)
    if record.religion is not None:
        link("religion", record.religion)
    if record.gender is not None:
        link("gender", record.gender)
    if record.marital_status is not None:
        link("marital", record.marital_status)

    age_node = link("age", age_bucket(record.age_years))
    triples.append(Triple(age_node, AGE_PROPERTY, str(int(record.age_years)),
                          obj_is_literal=True))

    return TripleGraph(patient_node=patient, triples=triples, node_meta=meta,
                       label=bool(record.readmitted_within_window))


def _check_printable(text: str, what: str) -> str:
    if any(ord(ch) < 0x20 for ch in text):
        raise SerializationError(f"{what} contains control characters: {text!r}")
    return text


def node_iri(node_id: str) -> str:
    facet, _, key = node_id.partition("/")
    _check_printable(key, f"node {facet!r} key")
    return f"{NAMESPACE}node/{facet}/{quote(key, safe='')}"


def _predicate_iri(predicate: str) -> str:
    return f"{NAMESPACE}{predicate}"


def _literal(text: str) -> str:
    _check_printable(text, "literal")
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_ntriples(graph: TripleGraph) -> str:
    """Render the graph as canonical N-Triples: unique sorted lines."""
    lines = set()
    for t in graph.triples:
        obj = _literal(t.obj) if t.obj_is_literal else f"<{node_iri(t.obj)}>"
        lines.add(f"<{node_iri(t.subject)}> <{_predicate_iri(t.predicate)}> {obj} .")
    return "\n".join(sorted(lines)) + "\n" if lines else ""


_LINE_RE = re.compile(
    r'^<(?P<s>[^<>"]+)> <(?P<p>[^<>"]+)> '
    r'(?:<(?P<o>[^<>"]+)>|"(?P<lit>(?:[^"\\]|\\.)*)") \.$'
)


def _parse_node(iri: str, line_no: int) -> tuple[str, str, str]:
    prefix = f"{NAMESPACE}node/"
    if not iri.startswith(prefix):
        raise NTriplesParseError(f"node IRI outside namespace: {iri!r}", line_no)
    facet, _, key = iri[len(prefix):].partition("/")
    if facet not in FACETS:
        raise NTriplesParseError(f"unknown facet category {facet!r}", line_no)
    key = unquote(key)
    description = "patient" if facet == "patient" else key
    return f"{facet}/{key}", facet, description


def parse_ntriples(text: str) -> TripleGraph:
    """Parse the canonical N-Triples subset back into a graph.

    The triple set and node metadata are recovered exactly; the label is
    provenance outside the format and stays ``None``.
    """
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise NTriplesParseError("empty document")

    triples = []
    meta = {}
    patients = set()
    for line_no, line in enumerate(lines, start=1):
        match = _LINE_RE.match(line)
        if not match:
            raise NTriplesParseError(f"malformed triple: {line!r}", line_no)
        subject, facet, desc = _parse_node(match["s"], line_no)
        meta[subject] = (facet, desc)
        if facet == "patient":
            patients.add(subject)

        pred_iri = match["p"]
        if not pred_iri.startswith(NAMESPACE):
            raise NTriplesParseError(f"predicate outside namespace: {pred_iri!r}", line_no)
        predicate = pred_iri[len(NAMESPACE):]

        if match["o"] is not None:
            obj, ofacet, odesc = _parse_node(match["o"], line_no)
            meta[obj] = (ofacet, odesc)
            if ofacet == "patient":
                patients.add(obj)
            triples.append(Triple(subject, predicate, obj))
        else:
            literal = match["lit"].replace('\\"', '"').replace("\\\\", "\\")
            triples.append(Triple(subject, predicate, literal, obj_is_literal=True))

    if len(patients) != 1:
        raise NTriplesParseError(f"expected exactly one patient node, found {len(patients)}")
    return TripleGraph(patient_node=patients.pop(), triples=sorted(triples),
                       node_meta=meta)


def query(graph: TripleGraph, pattern) -> list[Triple]:
    """Return all triples matching a single (s, p, o) pattern, sorted.

    ``None`` in any position is a wildcard; a literal object is matched by
    its unquoted text.
    """
    s, p, o = pattern
    return sorted(
        t for t in graph.triples
        if (s is None or t.subject == s)
        and (p is None or t.predicate == p)
        and (o is None or t.obj == o)
    )
