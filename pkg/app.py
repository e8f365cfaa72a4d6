"""
Command-line entry point.

Usage:
    python app.py verify --suite lemmas --trials 100 --seed 7
    python app.py region fm-check --theorem marton --channel c.json --dist d.json
    python app.py simulate --spec run.yaml --config qbroadcast.yaml
"""
import sys

from qbroadcast.cli import main


if __name__ == '__main__':
    sys.exit(main())
