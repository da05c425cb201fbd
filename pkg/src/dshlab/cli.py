"""Command-line front end.

Every subcommand is a thin client over the HTTP service: by default it
mounts the FastAPI app in-process (no socket), and --server points the
same calls at a remote `dsh serve` instance instead. Identical flags and
seed give byte-identical output either way.

Family specs use a small prefix mini-language, e.g.

    bit
    anti(d=64)
    pow(bit, 19)
    concat(bit, bit, anti)
    mix(0.25*const_pair(p=1), 0.75*anti)
    polyham([0, 0, 1])
    filter(t=2, sign=plus)
    annulus(alpha_max=0, t_plus=1)
    e2dsh(k=3, w=1)

Run `dsh families` for the full list of named families.
"""

from __future__ import annotations

import sys
from typing import Optional

import click
import httpx


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # starlette warns about its httpx-based TestClient; in-process
        # transport is exactly what we want here.
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _post(server: Optional[str], path: str, payload: dict) -> httpx.Response:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"{path} failed ({resp.status_code}): {detail}")
    return resp


def _parse_grid(text: str) -> list[float]:
    """Either 'start:stop:count' (inclusive linspace) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise click.BadParameter("grid range must be start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise click.BadParameter(f"malformed grid range {text!r}")
        if count < 1:
            raise click.BadParameter("grid count must be >= 1")
        if count == 1:
            return [start]
        step = (stop - start) / (count - 1)
        return [start + i * step for i in range(count)]
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise click.BadParameter(f"malformed grid {text!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--server", default=None, help="Base URL of a running dsh serve instance (default: in-process).")
@click.pass_context
def main(ctx: click.Context, server: Optional[str]) -> None:
    """Distance-sensitive hashing toolkit."""
    ctx.obj = server


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service under uvicorn."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


@main.command()
@click.pass_obj
def families(server: Optional[str]) -> None:
    """List named families and verification suites."""
    with _client(server) as client:
        resp = client.get("/families")
    data = resp.json()
    click.echo("families: " + ", ".join(data["families"]))
    click.echo("suites:   " + ", ".join(data["suites"]))


@main.command("cpf-curve")
@click.option("--family", required=True, help="Family spec (see dsh --help).")
@click.option("--grid", required=True, help="Argument grid: start:stop:count or comma list.")
@click.option("--n", default=0, show_default=True, help="MC samples per grid point (0 = closed form only).")
@click.option("--seed", default=0, show_default=True)
@click.option("--dim", default=16, show_default=True, help="Default dimension for families that omit d.")
@click.option("--out", default=None, help="Output CSV path (default: stdout).")
@click.pass_obj
def cpf_curve(server: Optional[str], family: str, grid: str, n: int, seed: int, dim: int, out: Optional[str]) -> None:
    """Sample a CPF curve to CSV (estimate, stderr, closed form, bounds)."""
    resp = _post(server, "/cpf/curve", {
        "family": family,
        "grid": _parse_grid(grid),
        "n": n,
        "seed": seed,
        "dim": dim,
    })
    _emit(resp.text, out)


@main.command()
@click.option("--suite", required=True, help="hamming, sphere, euclidean, bounds, ssse, or jensen.")
@click.option("--seed", default=None, type=int, help="Override the suite's fixed seeds.")
@click.pass_obj
def verify(server: Optional[str], suite: str, seed: Optional[int]) -> None:
    """Run a verification suite; exit nonzero on any violated check."""
    resp = _post(server, "/verify", {"suite": suite, "seed": seed})
    data = resp.json()
    for r in data["results"]:
        click.echo(f"[{r['verdict']}] {r['name']}: {r['detail']}")
    if not data["ok"]:
        sys.exit(1)
    click.echo(f"suite {suite}: ok")


@main.command("annulus-demo")
@click.option("--dataset", default=None, type=click.Path(exists=True), help="Points file; omit for a planted instance.")
@click.option("--queries", default=None, type=click.Path(exists=True), help="Query points file (dataset mode).")
@click.option("--family", default=None, help="Family spec to index with (dataset mode).")
@click.option("--r-minus", default=None, type=float)
@click.option("--r", default=None, type=float)
@click.option("--r-plus", default=None, type=float)
@click.option("--domain", default="hamming", type=click.Choice(["hamming", "sphere"]), show_default=True, help="Planted-instance domain.")
@click.option("--n", default=10000, show_default=True, help="Planted-instance size.")
@click.option("--n-queries", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, help="Per-query CSV path (default: stdout).")
@click.pass_obj
def annulus_demo_cmd(
    server: Optional[str],
    dataset: Optional[str],
    queries: Optional[str],
    family: Optional[str],
    r_minus: Optional[float],
    r: Optional[float],
    r_plus: Optional[float],
    domain: str,
    n: int,
    n_queries: int,
    seed: int,
    out: Optional[str],
) -> None:
    """Annulus search demo: planted instance or your own dataset."""
    if dataset is None:
        payload = {
            "mode": "planted",
            "domain": domain,
            "n": n,
            "n_queries": n_queries,
            "seed": seed,
        }
    else:
        missing = [
            flag
            for flag, val in (
                ("--queries", queries),
                ("--family", family),
                ("--r-minus", r_minus),
                ("--r", r),
                ("--r-plus", r_plus),
            )
            if val is None
        ]
        if missing:
            raise click.UsageError(f"dataset mode needs {', '.join(missing)}")
        from .datasets import read_dataset

        point_domain, points = read_dataset(dataset)
        query_domain, query_points = read_dataset(queries)
        if point_domain != query_domain:
            raise click.ClickException("dataset and query files disagree on domain")
        payload = {
            "mode": "dataset",
            "domain": point_domain,
            "points": points.tolist(),
            "queries": query_points.tolist(),
            "family": family,
            "r_minus": r_minus,
            "r": r,
            "r_plus": r_plus,
            "seed": seed,
        }
    data = _post(server, "/demos/annulus", payload).json()
    click.echo(
        f"n={data['n_points']} queries={data['n_queries']} L={data['L']} "
        f"pwr={data['pwr']} cutoff={data['cutoff']}"
    )
    click.echo(
        f"mean_recall={data['mean_recall']:.4f} "
        f"mean_candidates={data['mean_candidates']:.1f} "
        f"max_candidates={data['max_candidates']}"
    )
    _emit(data["csv"], out)


@main.command("range-demo")
@click.option("--n", default=10000, show_default=True)
@click.option("--n-queries", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, help="Per-offset CSV path (default: stdout).")
@click.pass_obj
def range_demo_cmd(server: Optional[str], n: int, n_queries: int, seed: int, out: Optional[str]) -> None:
    """Range-reporting demo on a planted Hamming instance."""
    data = _post(server, "/demos/range", {"n": n, "n_queries": n_queries, "seed": seed}).json()
    click.echo(
        f"n={data['n_points']} queries={data['n_queries']} L={data['L']} pwr={data['pwr']} "
        f"dup_factor={data['mean_duplicate_factor']:.2f} "
        f"all_within_r_plus={data['all_within_r_plus']}"
    )
    _emit(data["csv"], out)


@main.command("privacy-demo")
@click.option("--d", default=128, show_default=True)
@click.option("--r", default=0.1, show_default=True)
@click.option("--c", default=2.0, show_default=True)
@click.option("--epsilon", default=0.05, show_default=True)
@click.option("--delta", default=0.05, show_default=True)
@click.option("--rho", default=0.5, show_default=True)
@click.option("--big-c", "big_c", default=14.0, show_default=True, help="Calibrated repetition constant C.")
@click.option("--trials", default=2000, show_default=True, help="Pairs per arm (close and far).")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, help="Confusion-matrix CSV path (default: stdout).")
@click.pass_obj
def privacy_demo_cmd(
    server: Optional[str],
    d: int,
    r: float,
    c: float,
    epsilon: float,
    delta: float,
    rho: float,
    big_c: float,
    trials: int,
    seed: int,
    out: Optional[str],
) -> None:
    """Privacy-protocol demo: confusion matrix over planted pairs."""
    data = _post(server, "/demos/privacy", {
        "d": d,
        "r": r,
        "c": c,
        "epsilon": epsilon,
        "delta": delta,
        "rho": rho,
        "C": big_c,
        "n_pairs": trials,
        "seed": seed,
    }).json()
    click.echo(
        f"t={data['t']} N={data['n_hashes']} bits={data['bits']} s={data['step_exponent']}"
    )
    click.echo(
        f"close_yes={data['close_yes_rate']:.4f} far_yes={data['far_yes_rate']:.4f} "
        f"leak_close={data['mean_leakage_close']:.1f} leak_far={data['mean_leakage_far']:.1f}"
    )
    _emit(data["csv"], out)


if __name__ == "__main__":
    main()
