from greenseq import classify, rotate, run_ctx, run_sequence
from greenseq.selftest import load_fixture


def test_classification_fields() -> None:
    b, _ = load_fixture("a3_linear")
    ks = (2, 3, 1, 3, 2)
    cls = classify(run_sequence(b, ks))

    run_ctx.enrich(
        sequence=ks,
        kind=cls.kind.value,
        quiver="a3_linear",
        sigma=str(cls.sigma),
    )

    ctx = run_ctx.get_all()
    assert ctx["sequence"] == (2, 3, 1, 3, 2)
    assert ctx["kind"] == "maximal_green"
    assert ctx["quiver"] == "a3_linear"
    assert ctx["sigma"] == "(1 3 2)"


def test_result_fields_nest_under_their_command() -> None:
    run_ctx.enrich(quiver={"name": "kronecker", "n": 2})
    run_ctx.add("result.class", "reddening")
    run_ctx.add("result.red_count", 1)
    run_ctx.add("quiver.infinite_type_arrows", 1)

    ctx = run_ctx.get_all()
    assert ctx["result"] == {"class": "reddening", "red_count": 1}
    assert ctx["quiver"] == {"name": "kronecker", "n": 2, "infinite_type_arrows": 1}


def test_enrichment_keeps_operation_records() -> None:
    b, _ = load_fixture("kronecker")
    rotate(b, (1, 2, 1, 1))

    run_ctx.enrich(command="rotate", kind="reddening")

    ctx = run_ctx.get_all()
    assert ctx["command"] == "rotate"
    assert ctx["kind"] == "reddening"
    assert ctx["ops"]["rotate"]["inputs"]["ks"] == {"length": 4, "value": "1,2,1,1"}
    assert ctx["ops"]["rotate"]["result"]["sequence"] == "2,1,1,1"
