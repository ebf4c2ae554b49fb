"""Validates the schema, the shipped configs and every emitted JSON sidecar with jsonschema."""
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

SIDECARS = {
    "jis-sweep.summary.json": "jis_sweep_summary",
    "fit.json": "fit_result",
    "parity.json": "parity_table",
    "readout.json": "readout_report",
    "bandwidth-scan.json": "bandwidth_scan_report",
    "jis-4port.json": "four_port_report",
    "jpc-sweep.json": "table",
    "jis-sweep.json": "table",
    "flux-curve.json": "table",
}


def main():
    exe, schema_path, config_dir, work = sys.argv[1:5]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    root = jsonschema.Draft202012Validator(schema)
    work = pathlib.Path(work)
    shutil.rmtree(work, ignore_errors=True)
    checked = 0
    for cfg in sorted(pathlib.Path(config_dir).glob("*.json")):
        doc = json.loads(cfg.read_text())
        root.validate(doc)
        if doc["command"] == "selftest":
            continue
        out = work / cfg.stem
        subprocess.run([exe, doc["command"], "--config", str(cfg), "--out", str(out), "--format", "json"],
                       check=True, stdout=subprocess.DEVNULL)
        for produced in sorted(out.glob("*.json")):
            definition = SIDECARS[produced.name]
            sub = dict(schema, **{"$ref": "#/$defs/" + definition})
            for key in ("type", "required", "properties", "allOf", "additionalProperties"):
                sub.pop(key, None)
            jsonschema.Draft202012Validator(sub).validate(json.loads(produced.read_text()))
            checked += 1
    # Rejections must agree with the C++ validator.
    for bad in ({"schema": "paramix/1", "command": "readout", "records": [], "x": 1},
                {"schema": "paramix/1", "command": "jis-sweep", "jis": {"rho": 2}}):
        if root.is_valid(bad):
            raise SystemExit("schema accepted an invalid document: %s" % bad)
    print("%d sidecars validated" % checked)


if __name__ == "__main__":
    main()
