# Upper bounds on Dirac levels of the Mehta-Patil screened Coulomb potential
# from the envelope construction, checked against the shooting solver.
from relcomp import DiracChannel, MehtaPatil, mehta_patil_params, optimize_bound, solve_dirac

channels = [DiracChannel(3, 0.5, -1, 0), DiracChannel(3, 0.5, -1, 1), DiracChannel(3, 1.5, -1, 0)]

for Z in (2, 8, 20, 40, 80):
    v, lam = mehta_patil_params(Z)
    model = MehtaPatil(v, lam, Z)
    print(f"Z={Z:<3} v={v:.5f} lambda={lam:.5f}")
    for ch in channels:
        b = optimize_bound(model, ch)
        E = solve_dirac(model, ch).energy
        # binding energies in units of m, the interesting digits
        print(f"   {str(ch):<24} 1-E = {1 - E:.6e}   1-bound = {1 - b.bound_value:.6e}"
              f"   contact r = {b.t_star:8.2f}   {'ok' if E <= b.bound_value else 'VIOLATED'}")
