"""Cross-checks the C++ engines against rdflib, pyshacl and owlrl."""
import collections
import json
import os
import pathlib
import subprocess
import sys
import tempfile
import unittest

import owlrl
import pyshacl
import rdflib
from rdflib.compare import isomorphic
from rdflib.namespace import OWL, SH

CLI = pathlib.Path(os.environ["CAPGEN_CLI"])
SOURCE = pathlib.Path(os.environ["CAPGEN_SOURCE_DIR"])
CORPUS = SOURCE / "corpus"
CONFIG = SOURCE / "config" / "study.json"
TBOX_IRI = "http://www.w3id.org/hsu-aut/cask"

KIND_OF_COMPONENT = {
    SH.ClosedConstraintComponent: "CLOSED",
    SH.MinCountConstraintComponent: "MIN_COUNT",
    SH.MaxCountConstraintComponent: "MAX_COUNT",
    SH.ClassConstraintComponent: "CLASS",
    SH.DatatypeConstraintComponent: "DATATYPE",
    SH.NodeKindConstraintComponent: "NODE_KIND",
    SH.InConstraintComponent: "IN",
    SH.PatternConstraintComponent: "PATTERN",
    SH.HasValueConstraintComponent: "HAS_VALUE",
    SH.OrConstraintComponent: "OR",
    SH.NodeConstraintComponent: "NODE",
}


def parse(path, prefix=""):
    return rdflib.Graph().parse(data=prefix + path.read_text(), format="turtle")


def node_key(term):
    # Blank node labels are not stable across tools.
    return None if isinstance(term, rdflib.BNode) else term.n3()


def text_key(text):
    return None if text.startswith("_:") else text


def shacl_results(data, shapes, tbox):
    _, report, _ = pyshacl.validate(data, shacl_graph=shapes, ont_graph=tbox, inference="rdfs")
    found = collections.Counter()
    for result in report.subjects(SH.resultSeverity, SH.Violation):
        component = report.value(result, SH.sourceConstraintComponent)
        focus = report.value(result, SH.focusNode)
        path = report.value(result, SH.resultPath)
        found[(KIND_OF_COMPONENT.get(component, str(component)), node_key(focus), str(path) if path else "")] += 1
    return found


def disjointness_errors(data, tbox):
    closure = rdflib.Graph()
    closure += data
    closure += tbox
    owlrl.DeductiveClosure(owlrl.OWLRL_Semantics).expand(closure)
    messages = [str(o) for s, p, o in closure if str(p).endswith("#error") and "Disjoint classes" in str(o)]
    return messages


class Replay:
    root = None
    cells = []

    @classmethod
    def load(cls):
        if cls.root is not None:
            return
        cls.tmp = tempfile.TemporaryDirectory()
        subprocess.run([str(CLI), "replay", "--config", str(CONFIG), "--out", cls.tmp.name],
                       check=True, stdout=subprocess.DEVNULL)
        runs = list((pathlib.Path(cls.tmp.name) / "runs").iterdir())
        cls.root = runs[0]
        cls.cells = sorted(p.parent for p in cls.root.glob("*/*/counts.json"))


class OracleTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tbox = parse(CORPUS / "tbox" / "cask.ttl")
        cls.shapes = parse(CORPUS / "shapes" / "cask-shapes.ttl")
        Replay.load()

    def test_gold_conforms_under_pyshacl(self):
        for gold in sorted(CORPUS.glob("capabilities/*/gold.ttl")):
            with self.subTest(gold=gold.parent.name):
                conforms, _, text = pyshacl.validate(parse(gold), shacl_graph=self.shapes, ont_graph=self.tbox,
                                                     inference="rdfs")
                self.assertTrue(conforms, text)

    def test_gold_triple_counts_match_rdflib(self):
        for gold in sorted(CORPUS.glob("capabilities/*/gold.ttl")):
            cap = gold.parent.name
            with self.subTest(gold=cap):
                out = subprocess.run([str(CLI), "validate", str(gold), cap, "--config", str(CONFIG),
                                      "--format", "json"], check=True, capture_output=True, text=True).stdout
                self.assertEqual(json.loads(out)["counts"]["triples"], len(parse(gold)))

    def test_repaired_output_matches_rdflib_parse(self):
        checked = 0
        for cell in Replay.cells:
            if not (cell / "repaired.ttl").exists():
                continue
            with self.subTest(cell=str(cell.relative_to(Replay.root))):
                log = json.loads((cell / "repair.json").read_text())
                prefixes = "".join(line + "\n" for line in log["added_prefixes"])
                ours = parse(cell / "repaired.ttl")
                theirs = parse(cell / "extracted.ttl", prefixes)
                for graph in (ours, theirs):
                    graph.remove((None, OWL.imports, rdflib.URIRef(TBOX_IRI)))
                    graph.remove((None, OWL.imports, rdflib.URIRef(TBOX_IRI + "#")))
                self.assertTrue(isomorphic(ours, theirs))
                checked += 1
        self.assertEqual(checked, 42)

    def test_violations_match_pyshacl(self):
        for cell in Replay.cells:
            if not (cell / "repaired.ttl").exists():
                continue
            with self.subTest(cell=str(cell.relative_to(Replay.root))):
                expected = shacl_results(parse(cell / "repaired.ttl"), self.shapes, self.tbox)
                ours = collections.Counter()
                for v in json.loads((cell / "violations.json").read_text()):
                    ours[(v["kind"], text_key(v["focus"]), v["path"])] += 1
                self.assertEqual(ours, expected)

    def test_contradictions_match_owlrl(self):
        # OWL RL closure over the full TBox is slow, so only cells with reported contradictions are checked.
        checked = 0
        for cell in Replay.cells:
            path = cell / "contradictions.json"
            if not path.exists():
                continue
            ours = json.loads(path.read_text())
            if not ours:
                continue
            with self.subTest(cell=str(cell.relative_to(Replay.root))):
                theirs = disjointness_errors(parse(cell / "repaired.ttl"), self.tbox)
                self.assertEqual(len(ours), len(theirs), theirs)
                checked += 1
        self.assertGreater(checked, 0)

    def test_gold_is_consistent_under_owlrl(self):
        gold = parse(CORPUS / "capabilities" / "C1" / "gold.ttl")
        self.assertEqual(disjointness_errors(gold, self.tbox), [])


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
