# Dirac levels of a Coulomb potential, solved numerically and compared with
# the closed form. Run: python demos/coulomb_levels.py
from relcomp import Coulomb, DiracChannel, solve_dirac, spectroscopic_label
from relcomp.analytic import dirac_coulomb_energy, dirac_coulomb_level

u = 0.5
print(f"V(r) = -{u}/r, m = 1\n")
print(f"{'channel':<26}{'label':<7}{'solver':>14}{'closed form':>14}{'n_r = nu':>14}")
for tau in (-1, 1):
    for nu in range(3):
        ch = DiracChannel(3, 0.5, tau, nu)
        E = solve_dirac(Coulomb(u), ch).energy
        print(f"{str(ch):<26}{spectroscopic_label(ch):<7}{E:>14.9f}"
              f"{dirac_coulomb_level(u, ch):>14.9f}{dirac_coulomb_energy(u, ch):>14.9f}")

# For k_d > 0 the state whose upper component has nu nodes has radial index
# nu + 1, so the last column only matches the solver when tau = -1.
