"""Validate cpm run reports against the published schema."""
import json
import sys

import jsonschema


def main(argv):
    with open(argv[1]) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failed = False
    for path in argv[2:]:
        with open(path) as f:
            report = json.load(f)
        for err in validator.iter_errors(report):
            failed = True
            print(f"{path}: {err.json_path}: {err.message}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
