"""Acceptance suite: every shipped criterion at its stated tolerance.

Each test prints one `ACCEPTANCE <n>: PASS/FAIL` line (visible with -s or
in captured output on failure).  Criterion 7's real-MNIST branch needs
IDX files under data/mnist/ (or $INTREL_MNIST_DIR) and is skipped with a
notice when they are absent; a synthetic desk-scale variant of the same
pipeline always runs.

Criterion 4's loss-goal clause is known to be unattainable (see the test
docstring) and is kept as stated rather than loosened; it is the one
expected failure in this suite.
"""

import math
import os
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import make_random_model
from intrel.cli import heat_eps_policy, main as cli_main
from intrel.datasets import augment_random_features, load_iris, load_mnist
from intrel.errors import ConvergenceFailure
from intrel.intervals import Box, Interval, iv_add, iv_div, iv_monotone_unary, iv_mul, iv_sub
from intrel.network import Activation, forward, forward_box
from intrel.relevance import (
    FAMILY_ACTIVE,
    FAMILY_INACTIVE,
    FAMILY_UNDEFINED,
    FeaturePartition,
    FeatureQuery,
    OutputSpec,
    TargetMode,
    analyze_features,
    query_feature,
    relevance_map,
    relevance_score,
)
from intrel.sivia import sivia
from intrel.training import (
    DEFAULT_IRIS_SEEDS,
    IRIS_MLP2_CONFIG,
    LOSS_CROSS_ENTROPY,
    TrainConfig,
    evaluate,
    train,
    train_first_converging,
)
from synth_digits import make_dataset, write_idx_pair

IRIS_CSV = str(Path(__file__).parents[1] / "data" / "iris.csv")
FIXTURE_IMAGES = str(Path(__file__).parent / "data" / "fixture-images.idx")
FIXTURE_LABELS = str(Path(__file__).parent / "data" / "fixture-labels.idx")

MNIST_DIR = Path(os.environ.get("INTREL_MNIST_DIR", Path(__file__).parents[1] / "data" / "mnist"))

WORKERS = 4


def report(criterion, passed, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    assert passed, f"criterion {criterion}: {detail}"


def sample_in(lo, hi, rng, n):
    t = rng.uniform(0.0, 1.0, n)
    return np.clip(lo + t * (hi - lo), lo, hi)


# -----------------------------------------------------------------------
# Criterion 1: interval containment, scalar ops plus whole networks
# -----------------------------------------------------------------------


def test_criterion_1_interval_containment():
    start = time.monotonic()
    rng = np.random.default_rng(1001)
    n = 100_000
    lo_a = rng.uniform(-20, 20, n)
    hi_a = lo_a + rng.uniform(0, 8, n)
    lo_b = rng.uniform(-20, 20, n)
    hi_b = lo_b + rng.uniform(0, 8, n)
    xa = sample_in(lo_a, hi_a, rng, n)
    xb = sample_in(lo_b, hi_b, rng, n)
    violations = 0
    for i in range(n):
        a = Interval(lo_a[i], hi_a[i])
        b = Interval(lo_b[i], hi_b[i])
        if not iv_add(a, b).contains(xa[i] + xb[i]):
            violations += 1
        if not iv_sub(a, b).contains(xa[i] - xb[i]):
            violations += 1
        if not iv_mul(a, b).contains(xa[i] * xb[i]):
            violations += 1
        if not (lo_b[i] <= 0.0 <= hi_b[i]):
            if not iv_div(a, b).contains(xa[i] / xb[i]):
                violations += 1
        if i % 4 == 0:
            scaled = Interval(lo_a[i] / 4.0, hi_a[i] / 4.0)
            xs = xa[i] / 4.0
            if not iv_monotone_unary("exp", scaled).contains(math.exp(xs)):
                violations += 1
            if not iv_monotone_unary("tanh", scaled).contains(math.tanh(xs)):
                violations += 1
            logi = 1.0 / (1.0 + math.exp(-xs)) if xs >= 0 else math.exp(xs) / (1 + math.exp(xs))
            if not iv_monotone_unary("logistic", scaled).contains(logi):
                violations += 1

    from intrel.training import forward_batch

    for sizes, out_act in (
        ((4, 2, 3), Activation.LOGISTIC),
        ((4, 8, 3), Activation.LOGISTIC),
        ((16, 10, 5), Activation.SOFTMAX),
    ):
        model = make_random_model(sizes, seed=sum(sizes), output=out_act)
        for _ in range(334):
            c = rng.uniform(-1, 1, sizes[0])
            r = rng.uniform(0, 0.6, sizes[0])
            box = Box(np.clip(c - r, -1, 1), np.clip(c + r, -1, 1))
            enclosure = forward_box(model, box)
            pts = rng.uniform(0, 1, (100, sizes[0])) * (box.hi - box.lo) + box.lo
            outs = forward_batch(model, np.clip(pts, box.lo, box.hi))
            bad = (outs < enclosure.lo) | (outs > enclosure.hi)
            violations += int(bad.any(axis=1).sum())

    elapsed = time.monotonic() - start
    report(1, violations == 0 and elapsed < 60.0,
           f"0 required violations, got {violations}; runtime {elapsed:.1f}s < 60s")


# -----------------------------------------------------------------------
# Criterion 2: SIVIA against analytic preimages
# -----------------------------------------------------------------------


def iv_sqr(a: Interval) -> Interval:
    lo2 = math.nextafter(a.lo * a.lo, -math.inf)
    hi2 = math.nextafter(a.hi * a.hi, math.inf)
    if a.lo >= 0.0:
        return Interval(max(lo2, 0.0), hi2)
    if a.hi <= 0.0:
        return Interval(max(math.nextafter(a.hi * a.hi, -math.inf), 0.0),
                        math.nextafter(a.lo * a.lo, math.inf))
    return Interval(0.0, max(hi2, math.nextafter(a.lo * a.lo, math.inf)))


def test_criterion_2_square_preimage():
    start = time.monotonic()
    inclusion = lambda bx: Box.from_intervals([iv_sqr(bx[0])])  # noqa: E731
    eps = 1e-3
    paving, _ = sivia(inclusion, Box([1.0], [4.0]), eps, Box([-3.0], [3.0]))
    feasible = paving.feasible_measure()
    boundary = paving.boundary_measure()

    rng = np.random.default_rng(1002)
    pts = rng.uniform(-3.0, 3.0, 100_000)
    feas = sorted((b.lo[0], b.hi[0]) for b in paving.feasible)
    infeas = sorted((b.lo[0], b.hi[0]) for b in paving.infeasible)
    import bisect

    def covered(ivs, x):
        i = bisect.bisect_right(ivs, (x, math.inf)) - 1
        return i >= 0 and ivs[i][0] <= x <= ivs[i][1]

    lo_m = math.nextafter(1.0, -math.inf)
    hi_m = math.nextafter(4.0, math.inf)
    violations = 0
    for x in pts:
        fx = x * x
        if covered(feas, x):
            if not lo_m <= fx <= hi_m:
                violations += 1
        elif covered(infeas, x):
            if lo_m <= fx <= hi_m:
                violations += 1
    elapsed = time.monotonic() - start
    report(
        2,
        abs(feasible - 2.0) <= 0.02
        and boundary <= 8 * eps
        and violations == 0
        and elapsed < 30.0,
        f"square: feasible {feasible:.4f} = 2.0 +- 0.02, boundary {boundary:.4f} <= {8 * eps}, "
        f"{violations} sampling violations, runtime {elapsed:.1f}s < 30s",
    )


def test_criterion_2_annulus_preimage():
    start = time.monotonic()
    inclusion = lambda bx: Box.from_intervals([iv_add(iv_sqr(bx[0]), iv_sqr(bx[1]))])  # noqa: E731
    paving, _ = sivia(inclusion, Box([1.0], [2.0]), 0.02, Box([-2.0, -2.0], [2.0, 2.0]))
    inner = paving.feasible_measure()
    outer = inner + paving.boundary_measure()
    # the paving brackets the true area; its midpoint is the area estimate
    estimate = 0.5 * (inner + outer)
    true_area = math.pi
    elapsed = time.monotonic() - start
    report(
        2,
        inner <= true_area <= outer
        and abs(estimate - true_area) <= 0.03 * true_area
        and elapsed < 30.0,
        f"annulus: {inner:.4f} <= pi <= {outer:.4f}, estimate {estimate:.4f} within 3% of pi, "
        f"runtime {elapsed:.1f}s < 30s",
    )


# -----------------------------------------------------------------------
# Criterion 3: relevance formula branches
# -----------------------------------------------------------------------


def _partition(segments, rng=Interval(-1.0, 1.0)):
    query = FeatureQuery(
        pattern=np.zeros(1), feature=0, spec=OutputSpec(node=0), eps=1e-3, feature_range=rng
    )
    return FeaturePartition(segments=tuple(segments), query=query)


def test_criterion_3_relevance_rules():
    formula = relevance_score(
        _partition(
            [(Interval(0.0, 0.5), FAMILY_ACTIVE), (Interval(0.5, 2.0), FAMILY_INACTIVE)],
            Interval(0.0, 2.0),
        )
    )
    r1 = relevance_score(
        _partition(
            [(Interval(-1.0, 0.996), FAMILY_INACTIVE), (Interval(0.996, 1.0), FAMILY_UNDEFINED)]
        )
    )
    r2 = relevance_score(_partition([(Interval(-1.0, 1.0), FAMILY_INACTIVE)]))
    fully_active = relevance_score(_partition([(Interval(-1.0, 1.0), FAMILY_ACTIVE)]))
    ok = (
        formula.value == 0.75
        and formula.rule_applied == "formula"
        and r1.value == 1.0
        and r1.rule_applied == "R1"
        and r2.value == 0.0
        and r2.rule_applied == "R2"
        and fully_active.value == 0.0
    )
    report(3, ok, "formula 0.75, R1 -> 1, R2 -> 0, fully active -> 0, all exact")


# -----------------------------------------------------------------------
# Criterion 4: iris end to end
# -----------------------------------------------------------------------


def test_criterion_4_loss_goal_unattainable():
    """Kept as stated; fails by construction and documents why.

    The required goal is MSE <= 1e-3 over 150 patterns x 3 outputs.  On
    the full iris data a 2-hidden-unit tanh network cannot classify
    pattern 84 correctly (the published run also reports 149/150), and a
    single wrong pattern already contributes at least ~0.5 squared error
    (outputs pinned at the 0.5/0.5 crossover), i.e. MSE >= 0.5/450 =
    1.1e-3 > 1e-3.  Levenberg-Marquardt restarts bottom out at SSE = 1.0
    (MSE 2.22e-3), and this trainer's gradient descent matches that
    plateau.  The check below is therefore expected to fail; it is not
    loosened because the target itself, not the implementation, is out of
    reach.
    """
    ds = load_iris(IRIS_CSV)
    try:
        result = train_first_converging(IRIS_MLP2_CONFIG, ds, DEFAULT_IRIS_SEEDS[:3])
        reached = result.final_loss <= IRIS_MLP2_CONFIG.goal_loss
        detail = f"a seed reached MSE {result.final_loss:.3g} <= 1e-3"
    except ConvergenceFailure as exc:
        reached = False
        detail = f"no shipped seed reaches MSE <= 1e-3 ({exc})"
    report("4 (loss goal)", reached, detail)


def test_criterion_4_iris_end_to_end(iris_fixture):
    ds, result = iris_fixture
    accuracy, predictions = evaluate(result.model, ds)

    start = time.monotonic()
    maps = [
        relevance_map(result.model, ds, c, beta=0.2, eps=1e-3, workers=WORKERS)
        for c in range(3)
    ]
    elapsed = time.monotonic() - start

    sums = np.zeros(4)
    count = 0
    for rmap in maps:
        for row in rmap.rows:
            if predictions[row.pattern_id] == ds.labels[row.pattern_id]:
                sums += [s.value for s in row.scores]
                count += 1
    mean_r = sums / count
    petal_length_max = int(np.argmax(mean_r)) == 2

    ok = accuracy >= 0.98 and elapsed < 120.0 and petal_length_max
    report(
        4,
        ok,
        f"accuracy {accuracy:.4f} >= 0.98; 3-class map in {elapsed:.1f}s < 120s; "
        f"mean R {np.round(mean_r, 4).tolist()} peaks at petal length",
    )


# -----------------------------------------------------------------------
# Criterion 5: artificial random features stay irrelevant
# -----------------------------------------------------------------------

AUGMENT_SEED = 20240117


def test_criterion_5_artificial_features():
    ds = load_iris(IRIS_CSV)
    aug = augment_random_features(ds, 2, seed=AUGMENT_SEED)
    result = train(IRIS_MLP2_CONFIG, aug)
    sums = np.zeros(6)
    count = 0
    for c in range(3):
        rmap = relevance_map(result.model, aug, c, beta=0.2, eps=1e-3, workers=WORKERS)
        for row in rmap.rows:
            sums += [s.value for s in row.scores]
            count += 1
    mean_r = sums / count
    artificial = mean_r[4:]
    ok = (artificial < 0.1).all() and (artificial < mean_r[2]).all()
    report(
        5,
        ok,
        f"artificial mean R {np.round(artificial, 4).tolist()} < 0.1 and below "
        f"petal length {mean_r[2]:.4f}",
    )


# -----------------------------------------------------------------------
# Criterion 6: misclassified pattern explained in desired mode
# -----------------------------------------------------------------------


def test_criterion_6_misclassification_analysis(iris_fixture):
    ds, result = iris_fixture
    _, predictions = evaluate(result.model, ds)
    wrong = np.nonzero(predictions != ds.labels)[0]
    if len(wrong) == 0:
        print("ACCEPTANCE 6: SKIP - fixture classifies every pattern correctly")
        pytest.skip("no misclassification in the shipped fixture")
    outside_counts = []
    for idx in wrong:
        x = ds.patterns[idx]
        true_class = int(ds.labels[idx])
        spec = OutputSpec(node=true_class, radius=0.2, mode=TargetMode.DESIRED)
        outside = 0
        for k in range(ds.n_features):
            part = query_feature(
                result.model, FeatureQuery(pattern=x, feature=k, spec=spec, eps=1e-3)
            )
            if part.family_at(float(x[k])) != FAMILY_ACTIVE:
                outside += 1
        outside_counts.append(outside)
    ok = all(c >= 1 for c in outside_counts)
    report(
        6,
        ok,
        f"misclassified patterns {wrong.tolist()}: own feature values fall outside the "
        f"active set for {outside_counts} of {ds.n_features} features each",
    )


# -----------------------------------------------------------------------
# Criterion 7: desk-scale per-pixel pipeline (784-100-10 softmax)
# -----------------------------------------------------------------------

DESK_CONFIG = TrainConfig(
    hidden_units=100,
    output_activation=Activation.SOFTMAX,
    loss=LOSS_CROSS_ENTROPY,
    learning_rate=0.2,
    max_epochs=800,
    goal_loss=0.05,
    seed=0,
    init_scale=0.05,
)


def _heat_values(model, x, node, v, eps=None, workers=WORKERS):
    target, policy_eps = heat_eps_policy(v)
    spec = OutputSpec(node=node, center=1.0, radius=1.0 - target.lo)
    parts = analyze_features(model, x, spec, eps or policy_eps, workers=workers)
    return np.array([relevance_score(p).value for p in parts])


def test_criterion_7_desk_scale_synthetic(tmp_path):
    """The criterion's pipeline on deterministic synthetic digits.

    Real MNIST is exercised by test_criterion_7_mnist when its files are
    available; this variant proves the desk-scale mechanics (IDX input,
    784-100-10 softmax training, per-pixel inversion, heat rendering,
    determinism, runtime) without external data.
    """
    from intrel.render import heat_image, write_ppm

    imgs, labs = make_dataset(1500, seed=77)
    write_idx_pair(imgs, labs, tmp_path / "tr-i.idx", tmp_path / "tr-l.idx")
    t_imgs, t_labs = make_dataset(300, seed=78)
    write_idx_pair(t_imgs, t_labs, tmp_path / "te-i.idx", tmp_path / "te-l.idx")
    train_ds = load_mnist(tmp_path / "tr-i.idx", tmp_path / "tr-l.idx")
    test_ds = load_mnist(tmp_path / "te-i.idx", tmp_path / "te-l.idx")

    result = train(replace(DESK_CONFIG, max_epochs=300), train_ds)
    accuracy, predictions = evaluate(result.model, test_ds)
    assert accuracy >= 0.90, f"synthetic test accuracy {accuracy:.3f}"

    correct = [i for i in range(test_ds.n_patterns) if predictions[i] == test_ds.labels[i]]
    chosen = correct[:8]
    assert len(chosen) == 8

    worst_time = 0.0
    digests = []
    for n, idx in enumerate(chosen):
        x = test_ds.patterns[idx]
        out = forward(result.model, x)
        node = int(np.argmax(out))
        start = time.monotonic()
        # run the first image at the default resolution policy; the rest at
        # a coarser override so the suite stays tractable
        values = _heat_values(result.model, x, node, float(out[node]),
                              eps=None if n == 0 else 1e-3)
        worst_time = max(worst_time, time.monotonic() - start)
        assert (values >= 0.0).all() and (values <= 1.0).all()
        path = tmp_path / f"heat{idx}.ppm"
        write_ppm(path, heat_image(values, 28))
        digests.append(path.read_bytes())

    # determinism: byte-identical heat image on a second run
    x = test_ds.patterns[chosen[1]]
    out = forward(result.model, x)
    node = int(np.argmax(out))
    values = _heat_values(result.model, x, node, float(out[node]), eps=1e-3)
    rerun = tmp_path / "heat-rerun.ppm"
    write_ppm(rerun, heat_image(values, 28))
    deterministic = rerun.read_bytes() == digests[1]

    ok = deterministic and worst_time < 300.0
    report(
        "7 (synthetic)",
        ok,
        f"accuracy {accuracy:.3f} >= 0.90 on synthetic digits; 8 heat images; all R in [0,1]; "
        f"deterministic bytes; worst per-image {worst_time:.0f}s < 300s with {WORKERS} workers",
    )


def test_criterion_7_mnist(tmp_path):
    paths = {
        "train_images": MNIST_DIR / "train-images-idx3-ubyte",
        "train_labels": MNIST_DIR / "train-labels-idx1-ubyte",
        "test_images": MNIST_DIR / "t10k-images-idx3-ubyte",
        "test_labels": MNIST_DIR / "t10k-labels-idx1-ubyte",
    }
    if not all(p.exists() for p in paths.values()):
        print(
            "ACCEPTANCE 7: SKIP - real MNIST IDX files not found under "
            f"{MNIST_DIR} (set INTREL_MNIST_DIR); synthetic desk-scale variant ran instead"
        )
        pytest.skip(f"MNIST files not present under {MNIST_DIR}")

    from intrel.render import heat_image, write_ppm

    full_train = load_mnist(paths["train_images"], paths["train_labels"])
    full_test = load_mnist(paths["test_images"], paths["test_labels"])
    assert full_train.n_patterns == 60_000 and full_test.n_patterns == 10_000
    train_ds = type(full_train)(
        patterns=full_train.patterns[:10_000],
        labels=full_train.labels[:10_000],
        class_names=full_train.class_names,
        scaling=full_train.scaling,
    )
    test_ds = type(full_test)(
        patterns=full_test.patterns[:2_000],
        labels=full_test.labels[:2_000],
        class_names=full_test.class_names,
        scaling=full_test.scaling,
    )
    result = train(DESK_CONFIG, train_ds)
    accuracy, predictions = evaluate(result.model, test_ds)

    correct = [i for i in range(test_ds.n_patterns) if predictions[i] == test_ds.labels[i]]
    chosen = correct[:8]
    worst_time = 0.0
    deterministic = True
    for n, idx in enumerate(chosen):
        x = test_ds.patterns[idx]
        out = forward(result.model, x)
        node = int(np.argmax(out))
        start = time.monotonic()
        values = _heat_values(result.model, x, node, float(out[node]))
        worst_time = max(worst_time, time.monotonic() - start)
        assert (values >= 0.0).all() and (values <= 1.0).all()
        path = tmp_path / f"mnist-heat{idx}.ppm"
        write_ppm(path, heat_image(values, 28))
        if n == 0:
            again = _heat_values(result.model, x, node, float(out[node]))
            other = tmp_path / "mnist-heat-rerun.ppm"
            write_ppm(other, heat_image(again, 28))
            deterministic = other.read_bytes() == path.read_bytes()

    ok = accuracy >= 0.90 and worst_time < 300.0 and deterministic
    report(
        7,
        ok,
        f"MNIST subset accuracy {accuracy:.4f} >= 0.90; 8 heat images; R in [0,1]; "
        f"deterministic; worst per-image {worst_time:.0f}s < 300s",
    )


# -----------------------------------------------------------------------
# Criterion 8: byte-identical CLI runs
# -----------------------------------------------------------------------


def test_criterion_8_cli_determinism(tmp_path):
    runner = CliRunner()

    def run(args):
        result = runner.invoke(cli_main, args)
        assert result.exit_code == 0, f"{args}: {result.output}"
        return result.output

    differences = []

    def compare(name, paths_a, paths_b, out_a, out_b):
        if out_a != out_b:
            differences.append(f"{name}: stdout differs")
        for a, b in zip(paths_a, paths_b):
            if Path(a).read_bytes() != Path(b).read_bytes():
                differences.append(f"{name}: {Path(a).name} differs")

    # train (model + log)
    t1, t2 = tmp_path / "m1.json", tmp_path / "m2.json"
    l1, l2 = tmp_path / "l1.csv", tmp_path / "l2.csv"
    out1 = run(["train", "--dataset", IRIS_CSV, "--model-out", str(t1), "--log", str(l1),
                "--max-epochs", "300", "--learning-rate", "2.0", "--seed", "0"])
    out2 = run(["train", "--dataset", IRIS_CSV, "--model-out", str(t2), "--log", str(l2),
                "--max-epochs", "300", "--learning-rate", "2.0", "--seed", "0"])
    compare("train", [t1, l1], [t2, l2], out1, out2)
    model = str(t1)

    # eval (predictions)
    p1, p2 = tmp_path / "p1.csv", tmp_path / "p2.csv"
    out1 = run(["eval", "--model", model, "--dataset", IRIS_CSV, "--predictions-out", str(p1)])
    out2 = run(["eval", "--model", model, "--dataset", IRIS_CSV, "--predictions-out", str(p2)])
    compare("eval", [p1], [p2], out1, out2)

    # relevance (stdout only)
    args = ["relevance", "--model", model, "--dataset", IRIS_CSV, "--pattern", "67",
            "--feature", "all", "--beta", "0.2", "--eps", "1e-3"]
    compare("relevance", [], [], run(args), run(args))

    # map (images + CSVs)
    m1, m2 = str(tmp_path / "mapA"), str(tmp_path / "mapB")
    out1 = run(["map", "--model", model, "--dataset", IRIS_CSV, "--class", "1",
                "--eps", "2e-3", "--out", m1, "--workers", "2"])
    out2 = run(["map", "--model", model, "--dataset", IRIS_CSV, "--class", "1",
                "--eps", "2e-3", "--out", m2, "--workers", "2"])
    files1 = [f"{m1}_feature{k}.ppm" for k in range(4)] + [f"{m1}_scores.csv", f"{m1}_segments.csv"]
    files2 = [f"{m2}_feature{k}.ppm" for k in range(4)] + [f"{m2}_scores.csv", f"{m2}_segments.csv"]
    compare("map", files1, files2, "", "")

    # heat (image + CSV) on the committed IDX fixture; stdout echoes the
    # differing output paths, so only the artifact bytes are compared
    dm = tmp_path / "digits.json"
    run(["train", "--images", FIXTURE_IMAGES, "--labels", FIXTURE_LABELS, "--model-out", str(dm),
         "--hidden-units", "8", "--output-activation", "softmax", "--loss", "cross_entropy",
         "--learning-rate", "0.5", "--max-epochs", "2000", "--goal-loss", "1e-3", "--seed", "3"])
    h1, h2 = tmp_path / "h1.ppm", tmp_path / "h2.ppm"
    run(["heat", "--model", str(dm), "--images", FIXTURE_IMAGES, "--labels", FIXTURE_LABELS,
         "--index", "1", "--eps", "1e-2", "--out", str(h1), "--workers", "2"])
    run(["heat", "--model", str(dm), "--images", FIXTURE_IMAGES, "--labels", FIXTURE_LABELS,
         "--index", "1", "--eps", "1e-2", "--out", str(h2), "--workers", "2"])
    compare("heat", [h1, tmp_path / "h1.csv"], [h2, tmp_path / "h2.csv"], "", "")

    # augment
    a1, a2 = tmp_path / "a1.csv", tmp_path / "a2.csv"
    run(["augment", "--dataset", IRIS_CSV, "--count", "2", "--seed", "9", "--out", str(a1)])
    run(["augment", "--dataset", IRIS_CSV, "--count", "2", "--seed", "9", "--out", str(a2)])
    compare("augment", [a1], [a2], "", "")

    report(8, not differences, f"all six commands byte-identical across runs {differences}")
