#!/usr/bin/env python3
# Copyright 2026 The kcpm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs the CLI on the clinic fixture and validates every JSON output."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

import jsonschema
from referencing import Registry, Resource


def registry(schema_dir):
    resources = []
    for p in sorted(schema_dir.glob("*.schema.json")):
        resources.append((p.name, Resource.from_contents(json.loads(p.read_text()))))
    return Registry().with_resources(resources)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kcpm", required=True)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    ap.add_argument("--data", required=True, type=pathlib.Path)
    args = ap.parse_args()

    reg = registry(args.schemas)
    clinic = args.data / "clinic"
    failures = 0
    checked = 0

    def validate(path, schema):
        nonlocal failures, checked
        v = jsonschema.Draft202012Validator({"$ref": schema}, registry=reg)
        docs = [json.loads(l) for l in path.read_text().splitlines() if l.strip()] if path.suffix == ".jsonl" else [
            json.loads(path.read_text())]
        for i, doc in enumerate(docs):
            checked += 1
            for err in v.iter_errors(doc):
                failures += 1
                where = "/".join(str(x) for x in err.absolute_path)
                print(f"{path.name}[{i}] {where}: {err.message}", file=sys.stderr)

    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp)

        def run(*argv):
            r = subprocess.run([args.kcpm, *argv], capture_output=True, text=True)
            if r.returncode != 0:
                sys.exit(f"kcpm {' '.join(argv)} exited {r.returncode}: {r.stderr}")

        config = str(clinic / "pipeline.toml")
        run("synth", "--config", config, "--cases", "200", "--out", str(out / "synth"))
        log = str(out / "synth" / "corrupted.xes")
        run("stats", "--log", log, "--out", str(out / "stats"))
        run("mine-dfg", "--log", log, "--out", str(out / "dfg"))
        run("mine-rules", "--kg", str(clinic / "kg.tsv"), "--max-body-length", "2", "--out", str(out / "rules"))
        run("augment", "--config", config, "--log", log, "--use-scorer", "--scorer-epochs", "10",
            "--out", str(out / "augment"))
        run("pipeline", "--config", config, "--log", log, "--out", str(out / "pipeline"))

        run("ingest", "--log", log, "--out", str(out / "ingest"))
        root = ET.parse(log).getroot()
        cases = []
        for trace in root.iter("trace"):
            for attr in trace:
                if attr.get("key") == "concept:name":
                    cases.append(attr.get("value"))
                    break
        with open(out / "labels.csv", "w") as f:
            f.write("case_id,class\n")
            for i, c in enumerate(cases):
                f.write(f"{c},class_{i % 2}\n")
        run("variants-train", "--log", log, "--labels", str(out / "labels.csv"), "--variant-epochs", "5",
            "--out", str(out / "vtrain"))
        run("variants-classify", "--log", log, "--model", str(out / "vtrain" / "variant_model.json"),
            "--out", str(out / "vclassify"))

        for manifest in sorted(out.glob("*/manifest.json")):
            validate(manifest, "manifest.schema.json")
        for dfg in sorted(out.glob("*/dfg.json")):
            validate(dfg, "dependency_graph.schema.json")
        for rules in sorted(out.glob("*/rules.jsonl")):
            validate(rules, "rule.schema.json")
        validate(clinic / "rules.jsonl", "rule.schema.json")
        validate(out / "stats" / "report.json", "stats_report.schema.json")
        validate(out / "ingest" / "report.json", "stats_report.schema.json")
        validate(out / "augment" / "report.json", "augmentation_report.schema.json")
        validate(out / "augment" / "scorer.json", "temporal_scorer.schema.json")
        validate(out / "pipeline" / "report.json", "pipeline_report.schema.json")
        validate(out / "vtrain" / "variant_model.json", "variant_model.schema.json")
        validate(out / "vclassify" / "partition.json", "partition.schema.json")

    print(f"{checked} documents checked, {failures} schema violations")
    return 1 if failures or checked == 0 else 0


if __name__ == "__main__":
    sys.exit(main())
