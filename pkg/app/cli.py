"""
CLI - command-line entry point for the sphere engine

    podles normalize "z*zb - q^-2*zb*z"
    podles integrate --domain sphere "rhoi^2"
    podles --format json verify --suite xi
"""

from __future__ import annotations
from typing import Sequence

import click
from dotenv import load_dotenv

from app.settings import get_settings
from app.suite_orchestrator import SUITES, run_command

load_dotenv()


def _run(ctx: click.Context, cmd: str, args: Sequence[str], **flags) -> None:
    merged = {**ctx.obj, **{k: v for k, v in flags.items() if v is not None}}
    exit_code, output = run_command(cmd, args, merged)
    click.echo(output, err=exit_code in (1, 2) and merged["format"] == "text")
    ctx.exit(exit_code)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed for randomized checks")
@click.option("--max-degree", type=click.IntRange(0, 12), default=None, help="Degree bound of basis sweeps")
@click.pass_context
def cli(ctx: click.Context, fmt: str, seed: int, max_degree: int):
    """Exact symbolic engine for the quantum sphere"""
    settings = get_settings()
    ctx.obj = {
        "format": fmt,
        "seed": settings.seed if seed is None else seed,
        "max_degree": settings.max_degree if max_degree is None else max_degree,
        "preset": settings.suq2_convention,
        "words": settings.word_count,
        "triples": settings.jacobi_triples,
    }


@cli.command()
@click.argument("expr")
@click.pass_context
def normalize(ctx, expr):
    """Canonical form of EXPR"""
    _run(ctx, "normalize", [expr])


@cli.command()
@click.argument("x")
@click.argument("y")
@click.pass_context
def mul(ctx, x, y):
    """Product X*Y in normal order"""
    _run(ctx, "mul", [x, y])


@cli.command()
@click.argument("x")
@click.argument("y")
@click.pass_context
def comm(ctx, x, y):
    """Graded commutator X*Y -+ Y*X"""
    _run(ctx, "comm", [x, y])


@cli.command()
@click.argument("expr")
@click.option("--variant", type=click.Choice(["sphere", "plane"]), default="sphere", show_default=True)
@click.pass_context
def star(ctx, expr, variant):
    """Involution of a function, form or derivative operator"""
    _run(ctx, "star", [expr], variant=variant)


@cli.command(name="d")
@click.argument("expr")
@click.pass_context
def exterior_d(ctx, expr):
    """Exterior derivative"""
    _run(ctx, "d", [expr])


@cli.command()
@click.argument("op")
@click.argument("expr")
@click.pass_context
def act(ctx, op, expr):
    """Action of OP (vector fields or del/delb) on EXPR"""
    _run(ctx, "act", [op, expr])


@cli.command()
@click.argument("expr")
@click.option("--domain", type=click.Choice(["sphere", "plane"]), default="sphere", show_default=True)
@click.pass_context
def integrate(ctx, expr, domain):
    """Invariant integral of a function"""
    _run(ctx, "integrate", [expr], domain=domain)


@cli.command()
@click.argument("x")
@click.argument("y")
@click.pass_context
def pb(ctx, x, y):
    """Poisson bracket as the q -> 1 limit of the commutator"""
    _run(ctx, "pb", [x, y])


@cli.command()
@click.argument("expr")
@click.option("--to", "target", type=click.Choice(["w", "classical"]), default="w", show_default=True)
@click.pass_context
def patch(ctx, expr, target):
    """Express EXPR in the north-pole patch"""
    _run(ctx, "patch", [expr], to=target)


@cli.command(name="limit-classical")
@click.argument("expr")
@click.option("--pole-order", type=click.IntRange(min=0), default=0, show_default=True)
@click.pass_context
def limit_classical(ctx, expr, pole_order):
    """Coefficient-wise value at q = 1"""
    _run(ctx, "limit-classical", [expr], pole_order=pole_order)


@cli.command()
@click.option("--suite", default="all", show_default=True, help=f"all, or any of: {', '.join(SUITES)}")
@click.option("--words", type=click.IntRange(min=1), default=None, help="Random words per algebra")
@click.option("--triples", type=click.IntRange(min=1), default=None, help="Random Jacobi triples")
@click.pass_context
def verify(ctx, suite, words, triples):
    """Run the identity suites"""
    _run(ctx, "verify", [], suite=suite, words=words, triples=triples)


def main():
    cli(prog_name="podles")


if __name__ == "__main__":
    main()
