import logging

from kgraph.models import actions, alignment, constructions, dynamics, ktheory, skeleton
from kgraph.models.gallery import GALLERY
from kgraph.utils.config import load_config_file, verify_config
from kgraph.utils.exceptions import BadParameter, InvalidAction
from kgraph.utils.validate_value import validate_value

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "depth": 6,
    "pair_bound": 3,
    "window": 2,
    "format": "json",
    "method": "both",
    "takai_bound": 1,
    "mce_bound": 2,
}


class Workbench:
    """Entry point bundling the k-graph operations with one set of search bounds.

    :param depth: Largest prefix degree (d, …, d) searched for aperiodicity witnesses.
        Default: ``6``
    :type depth: int
    :param pair_bound: Largest |p| and |q| of the degree pairs compared by the aperiodicity
        search. Default: ``3``
    :type pair_bound: int
    :param window: Radius W of the box [-W, W]^l for skew products and the Takai check.
        Default: ``2``
    :type window: int
    :param format: Output format of the command-line interface, ``"json"`` or ``"text"``.
        Default: ``"json"``
    :type format: str
    :param method: K-theory method for crossed products, ``"pv"``, ``"orbits"`` or ``"both"``.
        Default: ``"both"``
    :type method: str
    :param takai_bound: Largest degree per colour of the paths checked by the Takai map.
        Default: ``1``
    :type takai_bound: int
    :param mce_bound: Degree bound per colour for the MCE comparison after a crossed product.
        Default: ``2``
    :type mce_bound: int
    :param config_path: Path to a config.json configuration file. If specified, the other
        parameters are loaded from this file. The default values are the same as above
    :type config_path: str
    """

    def __init__(
        self,
        # Option 1: Parameters
        depth=DEFAULT_CONFIG["depth"],
        pair_bound=DEFAULT_CONFIG["pair_bound"],
        window=DEFAULT_CONFIG["window"],
        format=DEFAULT_CONFIG["format"],
        method=DEFAULT_CONFIG["method"],
        takai_bound=DEFAULT_CONFIG["takai_bound"],
        mce_bound=DEFAULT_CONFIG["mce_bound"],
        # Option 2: Config file
        config_path=None,
    ):
        # Load configuration from parameters or file
        if config_path:
            config = load_config_file(config_path, DEFAULT_CONFIG)
        else:
            config = {
                "depth": depth,
                "pair_bound": pair_bound,
                "window": window,
                "format": format,
                "method": method,
                "takai_bound": takai_bound,
                "mce_bound": mce_bound,
            }

        verify_config(config, DEFAULT_CONFIG)
        self.config = config

    def _get(self, key, value):
        return self.config[key] if value is None else value

    def validate(self, sk, a=None):
        """Validate a skeleton, and the action on it when one is given

        :param sk: Skeleton
        :type sk: Skeleton
        :param a: Action, or None
        :type a: ZlAction
        :return: Report for the skeleton, or for the action once the skeleton is valid
        :rtype: ValidationReport
        """
        report = skeleton.validate_skeleton(sk)
        if report.ok and a is not None:
            return actions.validate_action(sk, a)
        return report

    def paths(self, sk, v, degree):
        return skeleton.enumerate_paths(sk, v, degree)

    def mce(self, mu, nu):
        return alignment.mce(mu, nu)

    def crossprod(self, sk, a, mce_bound=None):
        """Build Λ ×_α Z^l and compare its MCEs with those of Λ

        :param sk: Validated skeleton
        :type sk: Skeleton
        :param a: Action
        :type a: ZlAction
        :param mce_bound: Degree bound for the comparison. Default: the configured ``mce_bound``
        :type mce_bound: int
        :return: The construction and the comparison
        :rtype: tuple
        """
        bound = self._get("mce_bound", mce_bound)
        result = constructions.crossed_product(sk, a)
        check = constructions.mce_relationship_check(
            sk, a, ((bound,) * sk.k, (bound,) * a.l)
        )
        return result, check

    def recognize(self, sk, zl_colors):
        return constructions.recognize(sk, zl_colors)

    def skew(self, sk, c, window=None):
        constructions.validate_cocycle(sk, c)
        return constructions.skew_product(sk, c, self._get("window", window))

    def takai(self, sk, a, window=None, bound=None):
        return constructions.takai_check(
            sk, a, self._get("window", window), self._get("takai_bound", bound)
        )

    def simplicity(self, sk, a=None, depth=None, pair_bound=None):
        """Simplicity report for C*(Λ) ⋊ Z^l, or for C*(Λ) when no action is given

        The report also records whether the same checks on the crossed-product graph agree.

        :return: ``(report, agreement)``; agreement is None without an action
        :rtype: tuple
        """
        depth = self._get("depth", depth)
        pair_bound = self._get("pair_bound", pair_bound)
        if a is not None:
            _require_valid_action(sk, a)
        report = dynamics.simplicity(sk, a, pair_bound, depth)
        agreement = None
        if a is not None:
            agreement = dynamics.crossed_graph_equivalence_check(sk, a, depth, pair_bound)
        logger.info("Simplicity verdict: %s", report.verdict.value)
        return report, agreement

    def ktheory(self, sk, a=None, method=None):
        method = self._get("method", method)
        validate_value(method, "method")
        if a is not None:
            _require_valid_action(sk, a)
        return ktheory.ktheory(sk, a, method)

    def gallery(self, name, *params):
        """Build a named gallery instance

        :param name: Builder name, for example ``"m_loops"``
        :type name: str
        :param params: Builder parameters
        :return: The instance
        :rtype: GalleryInstance
        """
        validate_value(name, "gallery")
        try:
            return GALLERY[name](*params)
        except TypeError as e:
            raise BadParameter(f'Wrong parameters for gallery instance "{name}": {e}') from e


def _require_valid_action(sk, a):
    report = actions.validate_action(sk, a)
    if not report.ok:
        raise InvalidAction(f"Invalid action: {report.violations[0].detail}")
