"""Write the bundled 5-level count dataset.

Counts were generated once from multinomial(50, (.5,.2,.1,.1,.1)) and
multinomial(100, (.1,.1,.2,.3,.3)) draws; the realized tables are fixed
here so the dataset never changes.
"""

import csv
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "rbroc" / "datasets" / "ex2_counts.csv"

LEVELS = [1, 2, 3, 4, 5]
COUNTS_ND = [29, 7, 4, 5, 5]
COUNTS_D = [14, 7, 25, 33, 21]


def main() -> None:
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "count_nd", "count_d"])
        for row in zip(LEVELS, COUNTS_ND, COUNTS_D):
            w.writerow(row)
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
