"""Regenerate oracle_census_1e4.json from the test-side oracle only.

    python tests/data/freeze_oracle.py
"""

import json
import sys
from collections import Counter
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import brute_torsion, naive_classes  # noqa: E402

X = 10**4


def main():
    classes = naive_classes(X)
    tally = Counter(brute_torsion(A, B)[0] for A, B in classes)
    nontrivial = {f"{A[0]},{A[1]};{B[0]},{B[1]}": lab for (A, B) in classes
                  for lab in [brute_torsion(A, B)[0]] if lab != "Z/1"}
    out = {"X": X, "classes": len(classes), "tally": dict(sorted(tally.items())), "nontrivial": nontrivial}
    (HERE / "oracle_census_1e4.json").write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
