"""
The verification suite behind `verify-all`

Every check is a function of a shared SuiteContext returning a list of
failure descriptions. Failures are data: each check becomes a CheckReport,
and any error raised inside a check is recorded as its witness.
"""
import logging
import random
import threading
from fractions import Fraction

from src.algebra.bigcell import compute_realization, extract_PQ
from src.algebra.liealg import build_lie_algebra
from src.connection import casimir, monodromy, normal_form
from src.modules.coeffs import coeff_ring
from src.realization import endo_ring, wakimoto
from src.utils.config import SUPPORTED_TYPES
from src.utils.errors import VacmodError
from src.utils.helpers import Timer
from src.verification.runner import CheckReport, CheckRunner

logger = logging.getLogger(__name__)

NORMAL_FORM_TRUNCATION = 4
NORMAL_FORM_SAMPLES = 3


class SuiteContext:
    """
    Shared objects of one run, built on first use

    Args:
        config: RunConfig
    """

    def __init__(self, config):
        self.config = config
        self._lock = threading.RLock()
        self._cache = {}

    def _get(self, key, build):
        with self._lock:
            if key not in self._cache:
                with Timer(f"building {key}", quiet=True) as t:
                    self._cache[key] = build()
                logger.debug("%s built in %.2fs", key, t.elapsed)
            return self._cache[key]

    def rng(self, salt=""):
        return random.Random(f"{self.config.seed}:{salt}")

    def alg(self, cartan_type=None):
        cartan_type = cartan_type or self.config.cartan_type
        return self._get(("alg", cartan_type), lambda: build_lie_algebra(cartan_type))

    @property
    def ring(self):
        return self._get("ring", lambda: coeff_ring(self.alg(), self.config.level))

    @property
    def cell(self):
        return self._get("cell", lambda: compute_realization(self.alg()))

    @property
    def tables(self):
        return self._get("tables", lambda: extract_PQ(self.cell))

    @property
    def realization(self):
        return self._get("realization", lambda: wakimoto.build_realization(
            self.alg(), self.ring, self.tables, self.cell.variables, self.config.N))

    def matrices(self, name):
        return self._get(("matrices", name), lambda: self.alg().representation(name))

    def form(self, kind, module="adjoint"):
        return self._get(("form", kind, module), lambda: casimir.connection_matrix(
            self.alg(), self.matrices(module), kind, self.config.casimir_variant))

    def coinvariants(self, module="adjoint"):
        return self._get(("coinvariants", module), lambda: casimir.induce_and_coinvariants(
            self.alg(), self.ring, module))

    def connections(self, N=None):
        N = N or self.config.N
        rng = self.rng(f"connections:{N}")
        return self._get(("connections", N), lambda: [
            normal_form.random_connection(self.alg(), N, NORMAL_FORM_TRUNCATION, rng)
            for _ in range(NORMAL_FORM_SAMPLES)])


def run_check(name, func, context, parameters=None):
    """
    Run one check and wrap its outcome

    Returns:
        CheckReport
    """
    with Timer(name, quiet=True) as t:
        try:
            failures = func(context)
        except VacmodError as e:
            failures = [f"{type(e).__name__}: {e}"]
        except Exception as e:
            logger.exception("check %s raised", name)
            failures = [f"{type(e).__name__}: {e}"]
    report = CheckReport(name, not failures, parameters or {}, failures[0] if failures else "",
                         len(failures), t.elapsed)
    logger.info("%s: %s", name, "pass" if report.passed else f"FAIL ({report.witness})")
    return report


# -- checks per module -------------------------------------------------------

def _structure(cartan_type):
    return lambda ctx: ctx.alg(cartan_type).check_structure()


def _representations(ctx):
    alg = ctx.alg()
    for name in ("adjoint", "defining"):
        alg.check_representation(alg.representation(name))
    return []


def _bigcell(ctx):
    cell = ctx.cell
    return cell.check_homomorphism() + cell.check_homogeneity() + cell.check_weights() + \
        cell.check_leading_shape()


def _homomorphism(ctx):
    return wakimoto.verify_homomorphism(ctx.realization, ctx.config.D)


def _mutation_detected(ctx):
    real = ctx.realization
    failures = []
    for i in range(real.alg.rank):
        if not wakimoto.verify_homomorphism(wakimoto.mutated(real, i, 1), 1):
            failures.append(f"changing c_{i + 1} by 1 goes unnoticed")
    return failures


def _annihilation(ctx):
    return wakimoto.check_vacuum_annihilation(ctx.realization, ctx.config.D)


def _hin_bin(ctx):
    return wakimoto.check_hin_bin(ctx.realization)


def _constants(ctx):
    return wakimoto.check_constants(ctx.realization)


def _nonsimple(ctx):
    return wakimoto.derive_nonsimple_images(ctx.realization, min(ctx.config.D, 1)).failures


def _wp_isomorphism(ctx):
    wp = wakimoto.build_wp(ctx.realization, ctx.config.D)
    return wakimoto.check_wp_isomorphism(wp, ctx.config.D, ctx.rng("wp"))


def _n1_proposition(ctx):
    return wakimoto.check_n1_proposition(ctx.realization)


def _lambda_relations(ctx):
    module = ctx.realization.module
    return endo_ring.check_lambda_relations(module) + endo_ring.check_lambda_invariance(module) + \
        endo_ring.check_identification_scale(module)


def _lambda_diffops(ctx):
    return endo_ring.check_diffop_homomorphism(ctx.realization.module, rng=ctx.rng("diffops"))


def _lambda_commutes(ctx):
    real = ctx.realization
    elements = [x for _, x in endo_ring.lambda_table(real.module)]
    return endo_ring.check_lambda_commutes_with_realization(real, elements, min(ctx.config.D, 1))


def _lambda_injective(ctx):
    count, found = endo_ring.lambda_injectivity(ctx.realization.module, min(ctx.config.D, 2), ctx.rng("injective"))
    return [] if count == found else [f"{count} ring monomials span rank {found}"]


def _right_casimir(ctx):
    return endo_ring.check_right_casimir(ctx.alg(), ctx.ring)


def _regularized(ctx):
    return endo_ring.check_regularized(ctx.alg(), ctx.ring)


def _twist(module):
    return lambda ctx: casimir.verify_twist_identity(ctx.alg(), ctx.matrices(module), ctx.config.casimir_variant)


def _flatness(ctx):
    failures = casimir.flatness_check(ctx.form("casimir")) + casimir.flatness_check(ctx.form("nabla"))
    failures += casimir.check_weight_commutation(ctx.form("casimir"), ctx.matrices("adjoint"))
    return failures


def _perturbed_control(ctx):
    if not casimir.flatness_check(casimir.perturbed(ctx.form("casimir"))):
        return ["perturbed connection still passes the flatness check"]
    return []


def _leibniz(ctx):
    failures = []
    for module in ("adjoint", "defining"):
        coinv = ctx.coinvariants(module)
        failures.extend(f"{module}: {f}" for f in casimir.check_leibniz(coinv) + casimir.check_assembly(coinv))
    return failures


def _constant_transport(ctx):
    return monodromy.constant_transport_check(seed=ctx.config.seed)


def _eigenvalues(ctx):
    hbar = float(ctx.config.hbar)
    failures = []
    for kind in ("nabla", "casimir"):
        failures += [f"{kind}: {w}" for w in monodromy.eigenvalue_check(ctx.form(kind), hbar, rng=ctx.rng("loop"))]
    return failures


def _homotopy(ctx):
    return monodromy.homotopy_check(ctx.form("casimir"), float(ctx.config.hbar), rng=ctx.rng("loop"))


def _normal_forms(check):
    def run(ctx):
        failures = []
        for conn in ctx.connections():
            failures += check(ctx, conn)
        return failures
    return run


def _darboux(ctx):
    alg, N = ctx.alg(), ctx.config.N
    report = normal_form.darboux_report(ctx.connections(), endo_ring.generator_counts(alg, N))
    if not report["matches"]:
        return [f"normal-form coordinates {report['cartan_count']} + {report['residual_count']} "
                f"do not match the ring generators {endo_ring.generator_counts(alg, N)}"]
    return []


def build_checks(config):
    """
    The named checks for one configuration

    Returns:
        List of (name, function of SuiteContext)
    """
    checks = [(f"liealg.structure.{t}", _structure(t)) for t in SUPPORTED_TYPES]
    checks += [
        ("liealg.representations", _representations),
        ("bigcell.realization", _bigcell),
        ("wakimoto.homomorphism", _homomorphism),
        ("wakimoto.mutation_detected", _mutation_detected),
        ("wakimoto.annihilation", _annihilation),
        ("wakimoto.hin_bin", _hin_bin),
        ("wakimoto.constants", _constants),
        ("wakimoto.nonsimple_images", _nonsimple),
        ("wakimoto.isomorphism", _wp_isomorphism),
        ("endo_ring.relations", _lambda_relations),
        ("endo_ring.diffops", _lambda_diffops),
        ("endo_ring.commutes", _lambda_commutes),
        ("endo_ring.injective", _lambda_injective),
        ("casimir.twist.adjoint", _twist("adjoint")),
        ("casimir.twist.defining", _twist("defining")),
        ("casimir.flatness", _flatness),
        ("monodromy.constant_transport", _constant_transport),
        ("monodromy.eigenvalues", _eigenvalues),
        ("monodromy.homotopy", _homotopy),
        ("normal_form.round_trip", _normal_forms(lambda ctx, c: normal_form.check_round_trip(c))),
        ("normal_form.uniqueness", _normal_forms(
            lambda ctx, c: normal_form.check_uniqueness(c, ctx.rng("scramble")))),
        ("normal_form.torus", _normal_forms(
            lambda ctx, c: normal_form.check_torus_equivariance(
                c, [Fraction(i + 2) for i in range(c.alg.rank)]))),
        ("normal_form.phi_prime", _normal_forms(lambda ctx, c: normal_form.check_phi_prime(c))),
        ("normal_form.darboux", _darboux),
    ]
    if config.N == 1:
        checks += [
            ("wakimoto.n1_proposition", _n1_proposition),
            ("endo_ring.right_casimir", _right_casimir),
            ("endo_ring.regularized", _regularized),
            ("casimir.leibniz", _leibniz),
        ]
    if build_lie_algebra(config.cartan_type).rank > 1:
        checks.append(("casimir.perturbed_control", _perturbed_control))
    return checks


def verify_all(config, names=None):
    """
    Run the suite

    Args:
        config: RunConfig
        names: Optional subset of check names

    Returns:
        List of CheckReport sorted by name
    """
    context = SuiteContext(config)
    parameters = {"type": config.cartan_type, "N": config.N, "D": config.D,
                  "k": "symbolic" if config.level is None else str(config.level)}
    checks = [(name, func) for name, func in build_checks(config) if names is None or name in names]
    # the realization is shared by most checks; build it once before fanning out
    if any(name.startswith(("wakimoto", "endo_ring")) for name, _ in checks):
        try:
            context.realization
        except Exception as e:
            logger.warning("realization could not be built: %s", e)
    runner = CheckRunner([(name, lambda name=name, func=func: run_check(name, func, context, parameters))
                          for name, func in checks], workers=config.workers)
    reports = runner.run()
    reported = {r.name for r in reports}
    missing = [CheckReport(name, False, parameters, "check produced no report", 1)
               for name, _ in checks if name not in reported]
    return sorted(reports + missing, key=lambda r: r.name)


def report_to_json(config, reports):
    return {
        "config": {key: value for key, value in config.to_dict().items() if key not in ("workers", "verbose")},
        "checks": [r.to_json() for r in reports],
        "passed": bool(reports) and all(r.passed for r in reports),
    }
