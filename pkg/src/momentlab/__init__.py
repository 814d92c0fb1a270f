"""momentlab: desk-scale numerics for cubic moments of L-functions.

Modules
-------
ffcore      prime-field tables and length-q Rader transforms
characters  character group, Gauss sums, exact averaging identities
expsums     twisted hyper-Kloosterman sums and Weil-bound scans
lvalues     AFE central values with a Hurwitz Euler-Maclaurin oracle
hecke       Ramanujan tau, mu_f, twisted divisor functions, twist sums
tracefn     trace functions, correlation scans, Polya-Vinogradov, bilinear
moments     cubic/mollified moments, arithmetic cross-checks, census
cli         command line front end and fixtures
"""

from .ffcore import PrimeContext, build_context, dft_prime, idft_prime, mod_inverse
from .characters import DirichletCharacter, character_group, enumerate_characters, gauss_sum
from .expsums import KloostermanSpec, classical_kloosterman, kloosterman_direct, \
    kloosterman_table, weil_scan
from .lvalues import AfeWeight, LValue, dirichlet_batch, dirichlet_central, \
    cusp_batch, cusp_twist_central, hurwitz_oracle, triple_product_afe, weight_eval
from .hecke import HeckeTable, MuTable, build_tau, mu_f, twisted_divisor, twist_sum
from .tracefn import TraceFunction, ProjMatrix, MatrixClass, SmoothCutoff, \
    classify, correlation, correlation_scan, fourier, polya_check, bilinear_experiment
from .moments import MomentResult, MollifierSpec, CensusResult, census, census_cusp, \
    cubic_moment_dirichlet, cubic_moment_cusp, mollified_cubic, mollified_fourth, \
    moment_via_arithmetic

__version__ = "0.1.0"
