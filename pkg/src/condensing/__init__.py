"""Finite models of quantales, closure-operator domains, shells and condensing analyses."""

from .domains import (AbstractDomain, apply_closure, domain_join, domain_leq,
                      enumerate_domains, format_domain, identity_domain,
                      moore_closure, parse_domain, reduced_product, top_domain)
from .errors import (AmbientMismatch, CarrierError, CondensingError,
                     IterationCapError, LatticeError, ParseError,
                     PoolExhaustedError, PreconditionError, SizeLimitError)
from .lattice import (FiniteLattice, MonotoneMap, chain_lattice, kleene_gfp,
                      kleene_lfp, parse_lattice, powerset_lattice)
from .lp import (Call, Clause, Conj, Disj, EvalConfig, Fact, Program,
                 abstract_eval, check_condensing, concrete_eval,
                 counterexample_program, format_program, parse_program,
                 rename_apart)
from .quantale import (ExplicitQuantale, SubstQuantale, parse_quantale,
                       residual, standard_quantales, verify_linear_laws,
                       verify_quantale)
from .shells import (FunctionFamily, complete_shell, is_complete,
                     is_weak_complete, lin_arrow_domain, rf_operator,
                     shell_closure_map, weak_complete_shell)
from .subst import (TAU, Alphabet, FlatSubst, SubCarrier, SubstSet,
                    anti_instance, default_carrier, down_closure,
                    enumerate_carrier, independent_set, instance_leq,
                    named_sets, psh_alpha, psh_domain, residual_sets,
                    tensor_sets, unify)
from .syntax import format_set, parse_set

__version__ = "0.1.0"
