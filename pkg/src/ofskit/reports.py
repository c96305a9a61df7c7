"""Rendering of statistics, counts, sweeps and dendrograms.

Two styles are provided: aligned text for reading and TSV for machines.
All numeric formatting is derived from exact values; the only lossy step
is the final digit cut for display.
"""

from __future__ import annotations

from fractions import Fraction

from .analysis import ClassStats, CountReport, IntersectionTable
from .generalise import Dendrogram, Partition


def sci3(n: int) -> str:
    """Three significant digits in scientific notation, truncated toward
    zero (so 26,794,240 renders as 2.67e7)."""
    if n == 0:
        return "0"
    sign = "-" if n < 0 else ""
    n = abs(n)
    exp = len(str(n)) - 1
    mantissa = n * 100 // 10 ** exp
    return f"{sign}{mantissa // 100}.{mantissa % 100:02d}e{exp}"


def frac_decimal(value: Fraction, places: int = 4) -> str:
    scaled = round(Fraction(value) * 10 ** places)
    text = f"{scaled:0{places + 1}d}"
    return f"{text[:-places]}.{text[-places:]}"


def pct(value: Fraction) -> str:
    return frac_decimal(Fraction(value) * 100, 2) + "%"


def sim_display(value: Fraction, round_sim: int | None) -> str:
    if round_sim is not None:
        return frac_decimal(value, round_sim)
    return f"{value} ({frac_decimal(value)})"


def _table(rows: list[list[str]], *, right: set[int] = frozenset()) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = []
        for i, cell in enumerate(row):
            cells.append(cell.rjust(widths[i]) if i in right else cell.ljust(widths[i]))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def stats_text(stats: ClassStats) -> str:
    rows = [["class", "all", "unique (%)"]]
    for row in stats.rows:
        rows.append([row.name.label, f"{row.size:,}", f"{row.unique:,} ({pct(row.unique_pct)})"])
    rows.append(["TOTAL", f"{stats.total_size:,}", f"{stats.total_unique:,} ({pct(stats.total_pct)})"])
    return _table(rows, right={1, 2})


def stats_tsv(stats: ClassStats) -> str:
    lines = ["class\tall\tunique\tunique_pct"]
    for row in stats.rows:
        lines.append(f"{row.name.label}\t{row.size}\t{row.unique}\t{row.unique_pct}")
    lines.append(f"TOTAL\t{stats.total_size}\t{stats.total_unique}\t{stats.total_pct}")
    return "\n".join(lines) + "\n"


def intersections_text(table: IntersectionTable, *, round_sim: int | None = None) -> str:
    rows = [["pair", "intersection", "similarity"]]
    for row in table.rows:
        rows.append([f"{row.a.label} / {row.b.label}",
                     f"{row.intersection:,}",
                     sim_display(row.similarity, round_sim)])
    return _table(rows, right={1, 2})


def intersections_tsv(table: IntersectionTable, *, round_sim: int | None = None) -> str:
    lines = ["a\tb\tintersection\tsimilarity"]
    for row in table.rows:
        value = frac_decimal(row.similarity, round_sim) if round_sim is not None else str(row.similarity)
        lines.append(f"{row.a.label}\t{row.b.label}\t{row.intersection}\t{value}")
    return "\n".join(lines) + "\n"


def counts_text(report: CountReport) -> str:
    header = ["k", "derivations", "display"]
    if any(r.distinct is not None for r in report.rows):
        header += ["distinct", "distinct display"]
    rows = [header]
    for row in report.rows:
        line = [str(row.k), f"{row.derivations:,}", sci3(row.derivations)]
        if len(header) == 5:
            line += ([f"{row.distinct:,}", sci3(row.distinct)] if row.distinct is not None else ["", ""])
        rows.append(line)
    return _table(rows, right={1, 2, 3, 4})


def counts_tsv(report: CountReport) -> str:
    with_distinct = any(r.distinct is not None for r in report.rows)
    lines = ["k\tderivations\tdisplay" + ("\tdistinct\tdistinct_display" if with_distinct else "")]
    for row in report.rows:
        line = f"{row.k}\t{row.derivations}\t{sci3(row.derivations)}"
        if with_distinct:
            line += f"\t{row.distinct}\t{sci3(row.distinct)}" if row.distinct is not None else "\t\t"
        lines.append(line)
    return "\n".join(lines) + "\n"


def partition_label(partition: Partition) -> str:
    return ";".join(",".join(sorted(n.label for n in block)) for block in partition.blocks)


def sweep_tsv(results) -> str:
    lines = ["tau\ttau_decimal\tclusters\tpartition"]
    for tau, partition in results:
        lines.append(f"{tau}\t{frac_decimal(tau)}\t{len(partition.blocks)}\t{partition_label(partition)}")
    return "\n".join(lines) + "\n"


def dendrogram_text(tree: Dendrogram, *, round_sim: int | None = None) -> str:
    lines: list[str] = []

    def walk(node: Dendrogram, depth: int):
        pad = "  " * depth
        if node.is_leaf:
            lines.append(f"{pad}{node.name.label}")
        else:
            lines.append(f"{pad}+ merge at {sim_display(node.merge_tau, round_sim)}")
            for child in node.children:
                walk(child, depth + 1)

    walk(tree, 0)
    return "\n".join(lines) + "\n"


def dendrogram_dot(tree: Dendrogram, *, round_sim: int | None = None) -> str:
    lines = ["graph dendrogram {", "  node [shape=box];"]
    counter = 0

    def walk(node: Dendrogram) -> str:
        nonlocal counter
        nid = f"n{counter}"
        counter += 1
        if node.is_leaf:
            lines.append(f'  {nid} [label="{node.name.label}"];')
        else:
            lines.append(f'  {nid} [label="{sim_display(node.merge_tau, round_sim)}"];')
            for child in node.children:
                cid = walk(child)
                lines.append(f"  {nid} -- {cid};")
        return nid

    walk(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"
