"""Free energy and pressure of a gold film across thickness.

Scans film thickness at room temperature for both permittivity models and
prints a small table. The lossless (plasma) and dissipative (Drude) models
agree for thin films and split as the film thickens: the lossless free
energy decays exponentially once the thermal parameter passes 1, while the
Drude model keeps a zero-frequency term that only falls off as 1/a^2.

Run:  python3 demos/free_energy_scan.py        (a few seconds)
"""

import numpy as np

from filmcasimir import DielectricModel, FilmState, Kind, load_material, thermo_point

gold = load_material("gold")
plasma = DielectricModel(Kind.PLASMA, gold)
drude = DielectricModel(Kind.DRUDE, gold)

print(f"material: {gold.name}, omega_p = {gold.omega_p:.3g} rad/s, T = 300 K")
print()
header = f"{'a [nm]':>8} {'F_plasma [J/m^2]':>18} {'F_drude [J/m^2]':>18} {'ratio':>10} {'P_plasma [Pa]':>15}"
print(header)
print("-" * len(header))

for a_nm in np.geomspace(10, 200, 7):
    s = FilmState(a_nm * 1e-9, 300.0)
    tp = thermo_point(plasma, s)
    td = thermo_point(drude, s)
    print(
        f"{a_nm:8.1f} {tp.free_energy:18.6e} {td.free_energy:18.6e}"
        f" {td.free_energy / tp.free_energy:10.4f} {tp.pressure:15.6e}"
    )

print()
print("Both free energies are negative (the film attracts itself). The")
print("Drude/plasma ratio climbs with thickness because dissipation swaps")
print("the zero-frequency TE term for a slowly decaying TM one; past a few")
print("hundred nm that term is all that survives of the Drude free energy.")
