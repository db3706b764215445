"""
Package for unit tests of the hyperfine structure model.

The tests cover quantum numbers and configurations, QED reference levels,
the δ-corrected hydrogen-like solutions, the integral engine and its
quadrature oracles, the energy functional, the optimizer, the table
harness, the report generator and the command line.

Use ``pytest`` to run the fast tiers and ``--run-slow`` to include the
optimizer-driven table reproduction:

```
pytest -q tests
pytest -q tests --run-slow
```
"""
