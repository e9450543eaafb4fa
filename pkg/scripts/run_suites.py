"""Run every verification suite and write one manifest per suite."""

import argparse
import json
from pathlib import Path

from sharpquad import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    ap.add_argument("--out-dir", default="manifests")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in verify.SUITES:
        command = ["verify", name, "--seed", str(args.seed)]
        manifest = verify.verify_manifest(name, args.seed, command=command)
        (out / f"{name}.json").write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True))
        bad = sum(not r["passed"] for r in manifest.rows)
        failed += bad
        print(f"{name:18s} {len(manifest.rows):5d} rows  {bad:3d} failed  "
              f"{manifest.wall_time:6.1f}s  digest {manifest.digest()[:12]}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
