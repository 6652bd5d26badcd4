"""Command-line front end: ``kgraph <command> …``

Exit status 0 means success or a true verdict, 1 a failed validation, a false verdict or an
inapplicable formula, and 2 bad input.
"""
import json
import logging
import sys
from functools import wraps

import click

from kgraph.kgraph import Workbench
from kgraph.models.dynamics import Verdict
from kgraph.models.skeleton import validate_skeleton
from kgraph.utils import io
from kgraph.utils.exceptions import Inapplicable, KGraphError, NonSingletonDegree

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class ValidationFailed(Exception):
    def __init__(self, report):
        super().__init__("Input skeleton is not valid")
        self.report = report


def _emit(content, lines):
    """Print ``content`` as JSON, or ``lines`` when the text format is selected"""
    ctx = click.get_current_context()
    if ctx.obj["format"] == "text":
        for line in lines:
            click.echo(line)
    else:
        click.echo(json.dumps(content, indent=2, sort_keys=True, ensure_ascii=False))


def _report_lines(report):
    lines = [f"ok: {str(report.ok).lower()}"]
    lines += [f"{v.kind.value}: {v.detail}" for v in report.violations]
    lines += [f"{flag}: {str(value).lower()}" for flag, value in sorted(report.flags.items())]
    if report.boundary_exemptions:
        lines.append(f"boundary exemptions: {report.boundary_exemptions}")
    return lines


def _path_line(path):
    word = "·".join(path.word) or f"@{path.range}"
    return f"{word}  degree {list(path.degree)}  {path.range} <- {path.source}"


def _group_line(name, group):
    return f"{name} = {group}"


def _load(skeleton_path):
    """Read a skeleton file and refuse to continue unless it validates"""
    sk = io.load_skeleton(skeleton_path)
    report = validate_skeleton(sk)
    if not report.ok:
        raise ValidationFailed(report)
    return sk


def _write(out, content):
    if out:
        io.write_json(out, content)


def handle_errors(command):
    """Map library exceptions onto exit statuses"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except ValidationFailed as e:
            _emit(e.report.to_dict(), _report_lines(e.report))
            ctx.exit(1)
        except (Inapplicable, NonSingletonDegree) as e:
            click.echo(f"{type(e).__name__}: {e}", err=True)
            ctx.exit(1)
        except (KGraphError, ValueError, OSError) as e:
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            ctx.exit(2)

    return wrapper


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debugging output.")
@click.option("--config", "config_path", type=click.Path(), help="Path to a config.json file.")
@click.option(
    "--format", "output_format", type=click.Choice(["json", "text"]), help="Output format."
)
@click.pass_context
def main(ctx, verbose, config_path, output_format):
    """Tools for higher-rank graphs, their crossed products by Z^l and their K-theory"""
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT)
    try:
        workbench = Workbench(config_path=config_path) if config_path else Workbench()
    except (KGraphError, OSError) as e:
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        ctx.exit(2)
    ctx.obj = {"workbench": workbench, "format": output_format or workbench.config["format"]}


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("action_path", type=click.Path(), required=False)
@click.pass_obj
@handle_errors
def validate(obj, skeleton_path, action_path):
    """Check that a skeleton (and optionally an action on it) is well formed"""
    sk = io.load_skeleton(skeleton_path)
    report = validate_skeleton(sk)
    if report.ok and action_path:
        report = obj["workbench"].validate(sk, io.load_action(action_path, sk))
    _emit(report.to_dict(), _report_lines(report))
    if not report.ok:
        click.get_current_context().exit(1)


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.option("-v", "--vertex", required=True, help="Range vertex.")
@click.option("-n", "--degree", required=True, help="Degree, for example 1,2.")
@click.pass_obj
@handle_errors
def paths(obj, skeleton_path, vertex, degree):
    """List the paths with a given range and degree"""
    sk = _load(skeleton_path)
    found = obj["workbench"].paths(sk, vertex, io.parse_degree(degree, sk.k))
    _emit([io.path_to_dict(p) for p in found], [_path_line(p) for p in found])


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.option("-a", "first", required=True, help="Path: comma-separated edges, or @vertex.")
@click.option("-b", "second", required=True, help="Path: comma-separated edges, or @vertex.")
@click.pass_obj
@handle_errors
def mce(obj, skeleton_path, first, second):
    """Minimal common extensions of two paths"""
    sk = _load(skeleton_path)
    result = obj["workbench"].mce(io.parse_path(sk, first), io.parse_path(sk, second))
    content = [
        {"extension": io.path_to_dict(ext), "xi": list(xi.word), "eta": list(eta.word)}
        for ext, (xi, eta) in result.pairs
    ]
    _emit(content, [_path_line(ext) for ext in result.extensions] or ["(none)"])


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("action_path", type=click.Path())
@click.option("--out", type=click.Path(), help="Write the crossed-product skeleton here.")
@click.option("--mce-bound", type=int, help="Degree bound of the MCE comparison.")
@click.pass_obj
@handle_errors
def crossprod(obj, skeleton_path, action_path, out, mce_bound):
    """Build the crossed-product graph of a skeleton by an action"""
    sk = _load(skeleton_path)
    result, check = obj["workbench"].crossprod(sk, io.load_action(action_path, sk), mce_bound)
    content = io.skeleton_to_dict(result.skeleton)
    _write(out, content)
    _emit(
        {"skeleton": content, "mce_check": check.to_dict()},
        [
            f"k = {result.skeleton.k}, {len(result.skeleton.vertices)} vertices, "
            f"{len(result.skeleton.edges)} edges, {len(result.skeleton.squares)} squares",
            f"MCE comparison: {'ok' if check.ok else check.counterexample} "
            f"({check.checked} cases)",
        ],
    )
    if not check.ok:
        click.get_current_context().exit(1)


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.option("--zl-colors", required=True, help="Designated colours, for example 3,4.")
@click.option("--out", type=click.Path(), help="Write the base skeleton here.")
@click.option("--action-out", type=click.Path(), help="Write the recovered action here.")
@click.pass_obj
@handle_errors
def recognize(obj, skeleton_path, zl_colors, out, action_out):
    """Recover a base graph and an action from a crossed-product-shaped skeleton"""
    sk = _load(skeleton_path)
    base, action = obj["workbench"].recognize(sk, io.parse_int_list(zl_colors))
    content = {"skeleton": io.skeleton_to_dict(base), "action": io.action_to_dict(action)}
    _write(out, content["skeleton"])
    _write(action_out, content["action"])
    _emit(
        content,
        [
            f"base: k = {base.k}, {len(base.vertices)} vertices, {len(base.edges)} edges",
            f"action of Z^{action.l}",
        ],
    )


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("cocycle_path", type=click.Path())
@click.option("--window", type=int, help="Radius W of the box [-W, W]^l.")
@click.option("--out", type=click.Path(), help="Write the skew-product skeleton here.")
@click.pass_obj
@handle_errors
def skew(obj, skeleton_path, cocycle_path, window, out):
    """Skew product by a Z^l-valued cocycle, cut to a window"""
    sk = _load(skeleton_path)
    product = obj["workbench"].skew(sk, io.load_cocycle(cocycle_path), window)
    content = io.skeleton_to_dict(product)
    _write(out, content)
    _emit(
        content,
        [
            f"k = {product.k}, {len(product.vertices)} vertices, {len(product.edges)} edges, "
            f"{len(product.boundary)} boundary vertices"
        ],
    )


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("action_path", type=click.Path())
@click.option("--window", type=int, help="Radius W of the box [-W, W]^l.")
@click.pass_obj
@handle_errors
def takai(obj, skeleton_path, action_path, window):
    """Check the Takai duality map on a finite window"""
    sk = _load(skeleton_path)
    check = obj["workbench"].takai(sk, io.load_action(action_path, sk), window)
    _emit(
        check.to_dict(),
        [f"{'ok' if check.ok else 'failed'} ({check.checked} checks)"]
        + ([check.counterexample] if check.counterexample else []),
    )
    if not check.ok:
        click.get_current_context().exit(1)


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("action_path", type=click.Path(), required=False)
@click.option("--depth", type=int, help="Largest prefix depth searched.")
@click.option("--pair-bound", type=int, help="Largest |p| and |q| compared.")
@click.pass_obj
@handle_errors
def simplicity(obj, skeleton_path, action_path, depth, pair_bound):
    """Simplicity diagnostics for C*(Λ) or for its crossed product"""
    sk = _load(skeleton_path)
    action = io.load_action(action_path, sk) if action_path else None
    report, agreement = obj["workbench"].simplicity(sk, action, depth, pair_bound)
    content = report.to_dict()
    if agreement is not None:
        content["crossed_graph_agrees"] = agreement
    lines = [
        f"verdict: {report.verdict.value}",
        f"alpha-cofinal: {str(report.alpha_cofinal.ok).lower()}",
        f"aperiodicity: {report.aperiodicity.status.value} at depth {report.aperiodicity.depth}",
    ]
    lines += [f"note: {note}" for note in report.notes]
    _emit(content, lines)
    if report.verdict is not Verdict.SIMPLE:
        click.get_current_context().exit(1)


@main.command()
@click.argument("skeleton_path", type=click.Path())
@click.argument("action_path", type=click.Path(), required=False)
@click.option(
    "--method", type=click.Choice(["pv", "orbits", "both"]), help="Crossed-product method."
)
@click.pass_obj
@handle_errors
def ktheory(obj, skeleton_path, action_path, method):
    """K-groups of a graph algebra, or of its crossed product by Z"""
    sk = _load(skeleton_path)
    action = io.load_action(action_path, sk) if action_path else None
    report = obj["workbench"].ktheory(sk, action, method)
    _emit(
        report.to_dict(),
        [_group_line("K0", report.k0), _group_line("K1", report.k1), f"method: {report.method}"],
    )


def _gallery_params(name, args):
    params = []
    for index, arg in enumerate(args):
        if "," in arg or (name == "rank2_bratteli" and index == 0):
            params.append([int(x) for x in arg.split(",") if x])
        else:
            params.append(int(arg))
    return params


@main.command()
@click.argument("name")
@click.argument("args", nargs=-1)
@click.option("--out", type=click.Path(), help="Write the skeleton here.")
@click.option("--action-out", type=click.Path(), help="Write the action here.")
@click.pass_obj
@handle_errors
def gallery(obj, name, args, out, action_out):
    """Build a named example, for example ``gallery m_loops 2``"""
    instance = obj["workbench"].gallery(name, *_gallery_params(name, args))
    content = {
        "name": instance.name,
        "note": instance.note,
        "skeleton": io.skeleton_to_dict(instance.skeleton),
        "action": io.action_to_dict(instance.action) if instance.action else None,
    }
    _write(out, content["skeleton"])
    if action_out and instance.action:
        io.write_json(action_out, content["action"])
    _emit(
        content,
        [
            f"{instance.name}: {instance.note}",
            f"k = {instance.skeleton.k}, {len(instance.skeleton.vertices)} vertices, "
            f"{len(instance.skeleton.edges)} edges, {len(instance.skeleton.squares)} squares",
        ],
    )


def run(argv=None):
    """Run the command line and return its exit status instead of exiting

    :param argv: Arguments without the program name. Default: ``sys.argv[1:]``
    :type argv: list
    :return: Exit status
    :rtype: int
    """
    try:
        main.main(args=argv, prog_name="kgraph")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 2
    return 0
