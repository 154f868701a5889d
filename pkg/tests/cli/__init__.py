"""Fixtures for driving the command line in-process."""

from pathlib import Path


def write_dataset(directory: Path, rows: list[tuple], name: str = "data.csv") -> Path:
    path = directory / name
    path.write_text("".join(",".join(str(v) for v in row) + "\n" for row in rows))
    return path


def write_kg_config(directory: Path, name: str = "kg.json5") -> Path:
    path = directory / name
    path.write_text(
        '{study: "kg", n_list: [20], p_list: [30, 60], replications: 300, seed: 3,'
        ' imputation: {method: "w_nu"}}'
    )
    return path
