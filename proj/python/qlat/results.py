"""Reader for the versioned result CSVs.

Layout: a provenance comment line, a units comment line, the header row,
then data rows.

    # schema_version: 1; experiment: light_cone; config_hash: ...; code_version: ...
    # units: 1,1/J,sites,1
    model,t,x,comm_norm
"""

import csv
from dataclasses import dataclass, field

KNOWN_SCHEMAS = (1,)


class SchemaError(ValueError):
    pass


@dataclass
class ResultCsv:
    schema_version: int
    provenance: dict
    columns: list
    units: dict
    rows: list = field(default_factory=list)

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _parse_provenance(line):
    if not line.startswith("#"):
        raise SchemaError("missing provenance line")
    fields = {}
    for part in line[1:].split(";"):
        key, sep, value = part.partition(":")
        if sep:
            fields[key.strip()] = value.strip()
    if "schema_version" not in fields:
        raise SchemaError("provenance line has no schema_version")
    return fields


def _convert(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        prov = _parse_provenance(f.readline().rstrip("\n"))
        version = int(prov.pop("schema_version"))
        if version not in KNOWN_SCHEMAS:
            raise SchemaError(f"unknown schema_version {version}")
        units_line = f.readline().rstrip("\n")
        if not units_line.startswith("# units:"):
            raise SchemaError("missing units line")
        units = units_line[len("# units:"):].strip().split(",")
        reader = csv.reader(f)
        columns = next(reader)
        if len(units) != len(columns):
            raise SchemaError("units and header disagree in length")
        rows = [[_convert(c) for c in r] for r in reader if r]
    return ResultCsv(version, prov, columns, dict(zip(columns, units)), rows)
