"""Compiled machine vs interpreter over the built-in term corpus.

    python scripts/run_equiv.py --rank 2 --seeds 3 --out equiv.json
"""
import argparse
import sys

from setm.compiler import equiv_check, flagship_corpus, write_report


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--fuel", type=int, default=10**7)
    p.add_argument("--only", action="append", help="corpus term name; repeat")
    p.add_argument("--out", help="JSON report path")
    args = p.parse_args(argv)
    corpus = flagship_corpus()
    names = args.only or list(corpus)
    reports = []
    for name in names:
        report = equiv_check(corpus[name], args.rank, args.seeds, args.fuel, name=name)
        print(f"{report.rules:6d} rules  {report.summary()}", flush=True)
        reports.append(report)
    if args.out:
        write_report(reports, args.out)
    ok = all(r.ok for r in reports)
    print("all agree" if ok else "DISAGREEMENTS FOUND")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
