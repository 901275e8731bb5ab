"""Secondary acceptance: all four figure kinds render from acceptance CSVs."""

import pytest
from matplotlib.collections import PolyCollection

from cesaro_plots import PlotSpec, SchemaError, build_figure, render


def has_band(fig) -> bool:
    return any(isinstance(a, PolyCollection) for ax in fig.axes for a in ax.collections)


def embeds_hash(fig) -> bool:
    return any(t.get_text().startswith("config ") for t in fig.texts)


def test_a10_all_figure_kinds(acceptance_csvs, tmp_path):
    jobs = [
        ("tail_vs_k", ("a1_counterexample",), True),
        ("l1_decay", ("a2_l1_counterexample",), True),
        ("l1_decay", ("a3_l1_power_law",), True),
        ("bound_overlay", ("a4_expbound",), True),
        ("decomposition", ("a8_bayes_risk",), False),
        ("decomposition", ("a8_mar_mean",), False),
    ]
    results = []
    for kind, sources, expect_band in jobs:
        inputs = tuple(str(acceptance_csvs[s]) for s in sources)
        out = tmp_path / f"{kind}_{sources[0]}.png"
        spec = PlotSpec(inputs=inputs, kind=kind, output=str(out))
        fig = build_figure(spec)
        band_ok = has_band(fig) if expect_band else True
        hash_ok = embeds_hash(fig)
        render(spec)
        results.append((kind, sources[0], out.exists(), band_ok, hash_ok))

    # schema failure mode: a truncated header must be rejected with the
    # missing columns listed
    broken = tmp_path / "broken.csv"
    broken.write_text("experiment,family,n,value\nx,y,1,0.5\n")
    with pytest.raises(SchemaError, match="missing columns"):
        build_figure(PlotSpec(inputs=(str(broken),), kind="l1_decay", output="x.png"))

    ok = all(written and band and h for _, _, written, band, h in results)
    print(f"A10 {'PASS' if ok else 'FAIL'} - " + ", ".join(
        f"{kind}({src})" for kind, src, *_ in results
    ))
    for kind, src, written, band, h in results:
        assert written, f"{kind} from {src}: no file written"
        assert band, f"{kind} from {src}: confidence band missing"
        assert h, f"{kind} from {src}: config hash not embedded"
