#!/usr/bin/env python3
"""Validate JSON documents against the schemas in schemas/.

Usage: validate_schemas.py SCHEMA_DIR DOC=SCHEMA [DOC=SCHEMA ...]
SCHEMA is a path relative to SCHEMA_DIR (e.g. api/session.json).
A DOC may be a directory, in which case every *.json in it is checked
against the schema of the same name under SCHEMA; a "__variant" suffix in
the file name is ignored (extend__done.json uses extend.json).

As a guard against vacuous schemas, removing some top-level key of each
valid document must make it invalid.
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(root):
    schemas = {}
    registry = Registry()
    for path in sorted(root.rglob("*.json")):
        doc = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(doc)
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
        schemas[path.relative_to(root).as_posix()] = doc
    return schemas, registry


def main(argv):
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    root = pathlib.Path(argv[1])
    schemas, registry = load_registry(root)

    pairs = []
    for arg in argv[2:]:
        doc, _, schema = arg.partition("=")
        doc = pathlib.Path(doc)
        if doc.is_dir():
            for f in sorted(doc.glob("*.json")):
                name = f.stem.partition("__")[0] + ".json"
                pairs.append((f, f"{schema}/{name}" if schema else name))
        else:
            pairs.append((doc, schema))

    failures = 0
    for doc, schema_name in pairs:
        if schema_name not in schemas:
            print(f"FAIL {doc}: no schema '{schema_name}'")
            failures += 1
            continue
        validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
        instance = json.loads(doc.read_text())
        errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.path))
        if not errors and isinstance(instance, dict) and instance:
            if all(validator.is_valid({k: v for k, v in instance.items() if k != key}) for key in instance):
                print(f"FAIL {doc} [{schema_name}]: no single key is required")
                failures += 1
        if errors:
            failures += 1
            for e in errors[:5]:
                where = "/".join(str(p) for p in e.absolute_path)
                print(f"FAIL {doc} [{schema_name}] at /{where}: {e.message}")
        else:
            print(f"ok   {doc} [{schema_name}]")
    if not pairs:
        print("FAIL nothing to validate")
        return 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
