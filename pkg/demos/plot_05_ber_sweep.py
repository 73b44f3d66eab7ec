"""
A Monte Carlo BER sweep
=======================

The harness draws random messages, encodes, adds noise, and tallies
errors per decoder and SNR point. Paired noise makes the decoders see
identical channel realisations, and results do not depend on the
number of worker processes.
"""

# %%
from lcodec.sim import SweepConfig, report_to_csv, run_sweep, summary_lines

cfg = SweepConfig(
    code="hamming-7-4",
    ebn0=[1.0, 3.0, 5.0],
    decoders=["identity", "bp", "osd-2", "map-oracle", "mmse-oracle"],
    min_codewords=20_000,
    seed=5,
    timing=False,
)
report = run_sweep(cfg)
print("\n".join(summary_lines(report)))

# %%
# The CSV carries raw tallies so any interval convention can be applied later.
print(report_to_csv(report))
