"""`plot` command: render one figure from a job JSON file or flags.

    plot job.json
    plot --csv sweep.csv --kind contour --axes r,theta \
         --measure EN_a1_b --level 0.3544 --out fig5b.png

Job JSON schema: {"csv": ..., "kind": "line"|"contour", "axes": [...],
"measure": ..., "out": ..., "level": optional, "group": optional}.
Exits 2 on a missing column (naming it) or bad job, 4 on I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .render import ColumnError, PlotJob, render


def job_from_dict(payload: dict) -> PlotJob:
    required = {"csv", "kind", "axes", "measure", "out"}
    missing = required - set(payload)
    if missing:
        raise ValueError(f"job is missing keys: {', '.join(sorted(missing))}")
    unknown = set(payload) - required - {"level", "group"}
    if unknown:
        raise ValueError(f"unknown job keys: {', '.join(sorted(unknown))}")
    axes = payload["axes"]
    if isinstance(axes, str):
        axes = [a for a in axes.split(",") if a]
    return PlotJob(csv_path=payload["csv"], kind=payload["kind"],
                   axes=tuple(axes), measure=payload["measure"],
                   out_path=payload["out"],
                   level=payload.get("level"), group=payload.get("group"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render an omsteer sweep CSV to a PNG.")
    parser.add_argument("job", nargs="?", help="job JSON file")
    parser.add_argument("--csv")
    parser.add_argument("--kind", choices=("line", "contour"))
    parser.add_argument("--axes", help="comma-separated axis column name(s)")
    parser.add_argument("--measure", help="measure column (line plots accept "
                        "a comma-separated list)")
    parser.add_argument("--out")
    parser.add_argument("--level", type=float)
    parser.add_argument("--group")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.job:
            with open(args.job) as fh:
                job = job_from_dict(json.load(fh))
        else:
            flags = {"csv": args.csv, "kind": args.kind, "axes": args.axes,
                     "measure": args.measure, "out": args.out}
            if any(v is None for v in flags.values()):
                missing = [k for k, v in flags.items() if v is None]
                print(f"error: missing --{'/--'.join(missing)} (or pass a "
                      f"job JSON file)", file=sys.stderr)
                return 2
            if args.level is not None:
                flags["level"] = args.level
            if args.group is not None:
                flags["group"] = args.group
            job = job_from_dict(flags)
        info = render(job)
    except ColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(f"wrote {info.out_path} ({info.n_rows} rows, "
          f"{info.masked_points} masked)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
