"""hatloop: loop-germ arithmetic, Birkhoff factorization, extended loop
groups and the associated Poisson-Hopf calculus."""

from .errors import (ConvergenceError, DomainMismatch,
                     FactorizationFailed, HatloopError, MembershipError,
                     NonGeneric, NotInCenter, OneSidedError, ParseError,
                     SingularLoop, SmallDivisor, TableIncomplete,
                     UnsupportedGenerator)
from .germs import (COMPLEX, EXACT, LaurentGerm, bell_coeffs, germ_add,
                    germ_exp, germ_log, germ_mul, rescale, residue,
                    split_pm, window)
from .birkhoff import (Factorization, LoopMatrix, birkhoff_matrix2,
                       birkhoff_scalar, in_identity_component,
                       winding_number)
from .extgroup import (DoubleElement, ExtendedElement,
                       HatAlgebraElement, bilinear_form, double_form,
                       hat_inv, hat_mul, lie_bracket, manin_split,
                       poisson_at, twisted_commutator)
from .poisson import (PoissonPoly, TensorPoly, antipode, bracket,
                      bracket_gl1, bracket_sl2, coproduct, counit,
                      frobenius, tensor_bracket)
from .qheis import (QHeisenbergElement, commutator,
                    q_heisenberg_commutator, semiclassical_limit)
from .leaves import (EllipticPoint, Sl2Reduction,
                     TwistedOrbitInvariantGL1, elliptic_class,
                     gl1_diagonalize, gl1_leaf_point, qdiff_solve,
                     sl2_diag_equivalent, sl2_triangular_reduce,
                     twisted_conjugate)
from .verify import run_suite

__version__ = "0.1.0"
