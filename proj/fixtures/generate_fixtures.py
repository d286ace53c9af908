#!/usr/bin/env python3
"""Regenerates the synthetic and reconstructed fixtures in this directory.

Usage: python3 fixtures/generate_fixtures.py [path/to/rydmol]

The binary is only needed for the model-generated binding-energy set.
Every random draw uses a fixed seed, so reruns are byte-identical.
"""
import json
import math
import pathlib
import subprocess
import sys

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
HARTREE_TO_MHZ = 6.579683920502e9
FIELD_AU_TO_V_PER_CM = 5.14220674763e9


def fmt(x):
    return "%.8e" % x


def write(name, header_comment, header, rows):
    lines = ["# " + c for c in header_comment]
    lines.append(header)
    lines += [",".join(r) for r in rows]
    (HERE / name).write_text("\n".join(lines) + "\n")


def binding_energies_fig3():
    sigma = math.hypot(0.3, 0.5)
    v0 = {34: -28.3, 35: -23.4, 36: -19.2, 37: -16.3, 38: -13.4, 39: -11.5, 40: -9.6}
    v1 = {35: -10.6, 36: -8.6}
    unassigned = [(35, -15.9), (35, -13.0), (36, -12.2), (37, -10.8)]
    rows = [[str(n), "0", fmt(e), fmt(sigma)] for n, e in v0.items()]
    rows += [[str(n), "1", fmt(e), fmt(sigma)] for n, e in v1.items()]
    rows += [[str(n), "u", fmt(e), fmt(sigma)] for n, e in unassigned]
    write("fig3_binding_energies.csv",
          ["Reconstructed measured binding energies, n = 34..40 (see README.md).",
           "sigma = hypot(0.3 statistical, 0.5 digitization) MHz.",
           "Unassigned (v = u) entries are placeholders; they never enter the fit."],
          "n,v,e_b_mhz,sigma_mhz", rows)


def binding_energies_synthetic(binary, a_atom, seed, name):
    out = subprocess.run([binary, "model-curve", "--n", "34-40", "--a-atom", str(a_atom), "--format", "json"],
                         check=True, capture_output=True, text=True).stdout
    curve = json.loads(out)["curve"]
    rng = np.random.default_rng(seed)
    sigma = 0.3
    rows = []
    for row in curve:
        for v in (0, 1):
            e = row["e_v%d_mhz" % v]
            if e is None or (v == 1 and row["n"] not in (35, 36)):
                continue
            rows.append([str(row["n"]), str(v), fmt(e + sigma * rng.standard_normal()), fmt(sigma)])
    write(name, ["Synthetic: model binding energies at a_atom = %g bohr plus N(0, 0.3 MHz) noise, seed %d."
                 % (a_atom, seed)], "n,v,e_b_mhz,sigma_mhz", rows)


def stark_series(alpha, sigma_alpha, c0, seed, name, label):
    fields = np.round(np.arange(0.0, 1.41, 0.1), 10)
    x = fields ** 2
    conv = 2.0 * FIELD_AU_TO_V_PER_CM ** 2 / HARTREE_TO_MHZ
    slope = -alpha / conv
    sxx = float(np.sum((x - x.mean()) ** 2))
    point_sigma = sigma_alpha * math.sqrt(sxx) / conv
    rng = np.random.default_rng(seed)
    noise = point_sigma * rng.standard_normal(len(x))
    # Scatter orthogonal to (1, F^2): the fit returns the stated curve exactly.
    design = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(design, noise, rcond=None)
    noise = noise - design @ coef
    centers = c0 + slope * x + noise
    rows = [[fmt(f), fmt(c), fmt(point_sigma)] for f, c in zip(fields, centers)]
    write(name, ["Reconstructed Stark series, %s: center = c0 - (alpha/2) F^2 with alpha = %g a.u.," % (label, alpha),
                 "point sigma chosen so the weighted fit uncertainty is %g a.u.; seed %d." % (sigma_alpha, seed)],
          "field_v_per_cm,center_mhz,sigma_mhz", rows)


def decay_curve(tau, amplitude, baseline, t_max, points, seed, name, label):
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, t_max, points)
    counts = rng.poisson(amplitude * np.exp(-t / tau) + baseline)
    rows = [[fmt(ti), str(int(c))] for ti, c in zip(t, counts)]
    write(name, ["Synthetic decay, %s: Poisson(A exp(-t/tau) + b), tau = %g us, A = %g, b = %g, seed %d."
                 % (label, tau, amplitude, baseline, seed)], "delay_us,counts", rows)


def spectrum_35s(seed):
    rng = np.random.default_rng(seed)
    x = np.round(np.arange(-35.0, 8.0001, 0.1), 10)
    delta_b = 3.0

    def g(center, fwhm, amp):
        s = fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        return amp * np.exp(-0.5 * ((x - center) / s) ** 2)

    mean = 3.0 + g(0.0, 1.0, 800.0) + g(-3.0, 1.5, 120.0)
    mean += g(-23.4 - delta_b, 1.2, 60.0) + g(-10.6 - delta_b, 1.2, 25.0)
    mean += g(-15.9 - delta_b, 1.2, 20.0) + g(-13.0 - delta_b, 1.2, 20.0)
    counts = rng.poisson(mean)
    rows = [[fmt(d), str(int(c))] for d, c in zip(x, counts)]
    write("spectrum_35s_synthetic.csv",
          ["Synthetic 35S spectrum: atomic line at 0, Zeeman shoulder at -3 MHz, molecular lines at",
           "E_B - 3 MHz for E_B = -23.4 (v=0), -10.6 (v=1), -15.9 and -13.0 (unassigned); Poisson noise, seed %d."
           % seed], "detuning_mhz,signal", rows)


def main():
    binary = sys.argv[1] if len(sys.argv) > 1 else str(HERE.parent / "build" / "tools" / "rydmol")
    binding_energies_fig3()
    binding_energies_synthetic(binary, -15.0, 1501, "synthetic_binding_a-15.csv")
    stark_series(1542e7, 7e7, 0.0, 401, "stark_atomic_35s.csv", "atomic 35S")
    stark_series(1524e7, 4e7, -26.4, 402, "stark_molecular_35s_v0.csv", "molecular 35S v=0")
    table = {35: (65.0, 15.0), 36: (57.0, 17.0), 37: (57.0, 18.0)}
    for i, (n, (tau_atom, tau_mol)) in enumerate(table.items()):
        decay_curve(tau_atom, 2000.0, 5.0, 250.0, 26, 600 + i, "decay_atom_%ds.csv" % n, "atomic %dS" % n)
        decay_curve(tau_mol, 2000.0, 5.0, 75.0, 26, 700 + i, "decay_molecule_%ds_v0.csv" % n, "molecular %dS v=0" % n)
    spectrum_35s(35)


if __name__ == "__main__":
    main()
