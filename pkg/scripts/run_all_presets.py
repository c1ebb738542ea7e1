"""Run every bundled preset in its default mode and write CSVs to results/."""
from dataclasses import replace
from pathlib import Path

from anc_secrecy import bundled_presets
from anc_secrecy.cli import run


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "results"
    out_dir.mkdir(exist_ok=True)
    for name, cfg in bundled_presets().items():
        path = out_dir / f"{name}.csv"
        run(replace(cfg, output=str(path)))
        print(f"{name}: mode={cfg.mode} -> {path}")


if __name__ == "__main__":
    main()
