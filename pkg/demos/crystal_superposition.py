"""Walk through the 5-micrometre-crystal superposition estimates.

A cube of 1.6e13 atoms sits in an equal superposition of two
total-momentum branches drifting apart at 5 um/s.  Initially the
superposition lives in momentum; after a second of free flight the
branches separate in position and the state becomes a genuine spatial
cat of all its atoms.
"""

from macrosize.catalog import (
    leggett_crystal,
    leggett_scenario,
    nucleon_partition_comparison,
)

scenario = leggett_scenario()
report = leggett_crystal(scenario)

print("Momentum superposition at t = 0")
print(f"  total momentum difference  {report['delta_p_total']:.3e} kg m/s")
print(f"  extensive size  N_ext(P) = {report['n_ext_momentum']:.3e}")
print(f"  branch ratio    r_p      = {report['r_p']:.3e}")
print(f"  entangled size  N_ent(P) = {report['n_ent_momentum']:.3e}")
print("  -> no entanglement witnessed: each atom's momentum shift is buried")
print("     far below its thermal momentum spread.")
print()
print("Position superposition after 1 s of drift")
print(f"  branch separation          {report['delta_x']:.2e} m")
print(f"  extensive size  N_ext(Q) = {report['n_ext_position']:.3e}")
print(f"  branch ratio    r_q      = {report['r_q']:.3e}")
print(f"  entangled size  N_ent(Q) = {report['n_ent_position']:.3e}")
print("  -> the branches are locally distinguishable and the entangled size")
print("     reaches the atom number.")
print()

comparison = nucleon_partition_comparison(scenario)
print("Partition choice matters:")
print(
    "  nucleon partition suppresses the momentum entangled size by "
    f"{comparison['momentum_suppression']:.1e}"
)
print(
    "  but would enhance the position entangled size by "
    f"{comparison['position_enhancement']:.1f} (atom mass / nucleon mass)"
)
