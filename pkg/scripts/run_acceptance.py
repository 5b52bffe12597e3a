"""Run the acceptance matrix and optionally store the result lines and certificates.

    python3 scripts/run_acceptance.py --slow --certs out/
"""

import argparse
import json
import pathlib
import sys

from acdual import acceptance, certificates


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--slow", action="store_true", help="include D4 and the GL3(2) X(G) e_I0 runs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the results as JSON here")
    p.add_argument("--certs", help="directory for the fuzz-corpus certificates")
    args = p.parse_args()

    results = acceptance.run_all(slow=args.slow, seed=args.seed, echo=print)
    if args.report:
        rows = [{"number": c.number, "title": c.title, "ok": c.ok, "detail": c.detail} for c in results]
        pathlib.Path(args.report).write_text(json.dumps(rows, indent=2) + "\n")
    if args.certs:
        out = pathlib.Path(args.certs)
        out.mkdir(parents=True, exist_ok=True)
        for name, cert in acceptance.fuzz_certificates():
            certificates.write(cert, out / (name.replace(" ", "_").replace("(", "").replace(")", "") + ".json"))
    passed = sum(c.ok for c in results)
    print(f"{passed}/{len(results)} criteria pass")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
