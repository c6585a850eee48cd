"""dplab: point configurations, Weyl group tables, and point counts for
del Pezzo surfaces over finite fields.

The package is organized as:

- ``gf``: finite fields F_{p^n} with explicit Frobenius, towers, and
  normal bases;
- ``plane``: closed points of P^2 and general-position tests;
- ``lattice``: the Picard lattice Z^{1,r}, its lines and roots, and the
  Weyl groups W(E6) / W(E7) as line permutations;
- ``classes``: conjugacy-class invariants (eigenvalues, H^1, index,
  orbit types, Sato-Tate weights) and the 25-row class table;
- ``surfaces``: point counts and quadratic twists for degree-1 and
  degree-2 del Pezzo models, plus conic-bundle fiber analysis;
- ``search``: randomized witnesses and exhaustive nonexistence
  certificates for general-position configurations, and trace tables;
- ``cli``: the ``dplab`` command-line interface.
"""

__version__ = "0.1.0"
