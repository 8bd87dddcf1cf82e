"""
Stokes wave, Dirichlet-Neumann operator and conformal coordinates
================================================================

The second-order Stokes expansion solves the travelling-wave equations up to
an O(eps^3) residual. A conformal change of variables turns the linearized
operator into one with two coefficient functions p_eps and a_eps.
"""

from bfwaves import coefficient_functions, stokes_expansion, traveling_residual

h = 1.5
st = stokes_expansion(h)
print(f"c_h={st.c0:.6f} c_2={st.c2:.6f} eta2_0={st.eta2_0:.6f} eta2_2={st.eta2_2:.6f}")

# halving eps divides the residual by about 8
r1, r2 = traveling_residual(h, 0.02), traveling_residual(h, 0.01)
print(f"residual(0.02)={r1:.3e} residual(0.01)={r2:.3e} ratio={r1 / r2:.4f}")

# coefficient functions from the conformal fixed point against their expansions
eps = 0.005
cf = coefficient_functions(h, eps)
print("f_eps =", cf.f_eps, "iterations =", cf.conformal.iterations)
print("p cos(x):", cf.p_eps.cos_coeff(1), "expected", cf.p1_1 * eps)
print("a cos(x):", cf.a_eps.cos_coeff(1), "expected", cf.a1_1 * eps)
print("p cos(2x):", cf.p_eps.cos_coeff(2), "expected", cf.p2_2 * eps**2)
