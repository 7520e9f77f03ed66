"""Solution atlas for the forced steady problem u'' + u^2 = a*f(x) with decay at infinity.

The package computes and cross-validates the solution branches of the
boundary-value problem

    u''(x) + u(x)^2 = a * f(x),   u'(0) = 0,   u -> 0 as x -> infinity,

for even, decaying forcings f normalised to f(0) = 1.  Sub-modules:

- ``forcings``    forcing family (top hat, Gaussian, Lorentzian, hybrid, marginal)
- ``specfun``     self-contained special functions (K, cn, Gamma, I1)
- ``shooting``    RK4 initial-value integration, blow-up detection, bisection
- ``tophat``      exact piecewise phase-plane solutions for the top-hat forcing
- ``branches``    branch continuation, termination points, fold constant kappa
- ``asymptotics`` small-a laws, large-a series, homoclinic glueing, marginal exponents
- ``stokes``      singulant field, Stokes lines, optimal-truncation remainder
- ``cli``         command-line front end and figure/table reproduction driver
"""

__version__ = "0.1.0"
