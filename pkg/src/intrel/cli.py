"""Command-line front end: train, eval, relevance, map, heat, augment.

Exit codes: 0 on success, 1 on runtime failures (divergence, misclassified
heat input, file errors), 2 on usage errors (bad flags or invalid ids).
"""

from __future__ import annotations

import csv
import math

import click
import numpy as np

from .datasets import (
    augment_random_features,
    load_dataset_csv,
    load_mnist,
    save_dataset_csv,
)
from .errors import IntrelError, MisclassifiedInput
from .intervals import Interval
from .model_io import load_model, save_model
from .network import forward
from .relevance import (
    FeatureQuery,
    OutputSpec,
    TargetMode,
    analyze_features,
    default_workers,
    query_feature,
    relevance_map,
    relevance_score,
    write_scores_csv,
    write_segments_csv,
)
from .render import MAP_WIDTH, heat_image, partition_image, write_ppm
from .training import TrainConfig, evaluate, train


@click.group()
def main():
    """Guaranteed feature relevance for shallow MLP classifiers."""


def _load_patterns(dataset, images, labels):
    if dataset and (images or labels):
        raise click.UsageError("give either --dataset or --images/--labels, not both")
    if dataset:
        return load_dataset_csv(dataset)
    if images and labels:
        return load_mnist(images, labels)
    raise click.UsageError("a data source is required: --dataset or --images plus --labels")


def _runtime(exc: Exception) -> click.ClickException:
    return click.ClickException(f"{type(exc).__name__}: {exc}")


_DATA_OPTIONS = [
    click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="CSV dataset"),
    click.option("--images", type=click.Path(exists=True, dir_okay=False), help="IDX image file"),
    click.option("--labels", type=click.Path(exists=True, dir_okay=False), help="IDX label file"),
]


def data_options(fn):
    for opt in reversed(_DATA_OPTIONS):
        fn = opt(fn)
    return fn


@main.command(name="train")
@data_options
@click.option("--model-out", required=True, type=click.Path(dir_okay=False))
@click.option("--hidden-units", default=2, show_default=True)
@click.option("--hidden-activation", default="tanh", type=click.Choice(["tanh", "logistic"]))
@click.option("--output-activation", default="logistic", type=click.Choice(["logistic", "softmax"]))
@click.option("--loss", default="mse", type=click.Choice(["mse", "cross_entropy"]))
@click.option("--learning-rate", default=0.5, show_default=True)
@click.option("--max-epochs", default=20_000, show_default=True)
@click.option("--goal-loss", default=1e-3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--init-scale", default=0.5, show_default=True)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="write epoch,loss CSV")
def cmd_train(dataset, images, labels, model_out, hidden_units, hidden_activation,
              output_activation, loss, learning_rate, max_epochs, goal_loss, seed,
              init_scale, log_path):
    """Train a classifier and save it."""
    try:
        ds = _load_patterns(dataset, images, labels)
        config = TrainConfig(
            hidden_units=hidden_units,
            hidden_activation=hidden_activation,
            output_activation=output_activation,
            loss=loss,
            learning_rate=learning_rate,
            max_epochs=max_epochs,
            goal_loss=goal_loss,
            seed=seed,
            init_scale=init_scale,
        )
        result = train(config, ds)
        save_model(result.model, model_out)
        if log_path:
            with open(log_path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["epoch", "loss"])
                for epoch, value in enumerate(result.loss_history):
                    writer.writerow([epoch, f"{value:.17g}"])
        accuracy, _ = evaluate(result.model, ds)
        click.echo(
            f"final loss {result.final_loss:.6g} after {result.epochs_used} epochs; "
            f"training accuracy {accuracy:.4f}"
        )
    except IntrelError as exc:
        raise _runtime(exc)


@main.command(name="eval")
@data_options
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions-out", type=click.Path(dir_okay=False), help="per-pattern CSV")
def cmd_eval(dataset, images, labels, model_path, predictions_out):
    """Report accuracy of a saved model on a dataset."""
    try:
        ds = _load_patterns(dataset, images, labels)
        model = load_model(model_path)
        accuracy, predictions = evaluate(model, ds)
        if predictions_out:
            with open(predictions_out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["pattern_id", "predicted", "actual"])
                for i, (p, a) in enumerate(zip(predictions, ds.labels)):
                    writer.writerow([i, model.class_coding[int(p)], ds.class_names[int(a)]])
        correct = int(round(accuracy * ds.n_patterns))
        click.echo(f"accuracy {accuracy:.4f} ({correct}/{ds.n_patterns})")
    except IntrelError as exc:
        raise _runtime(exc)


@main.command(name="relevance")
@data_options
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pattern", "pattern_id", required=True, type=int)
@click.option("--feature", default="all", show_default=True, help="feature index or 'all'")
@click.option("--node", type=int, help="output node; defaults to the predicted class")
@click.option("--beta", default=0.2, show_default=True)
@click.option("--eps", default=1e-3, show_default=True)
@click.option("--mode", default="as_predicted", type=click.Choice(["as_predicted", "desired"]))
@click.option("--center", default=1.0, show_default=True)
def cmd_relevance(dataset, images, labels, model_path, pattern_id, feature, node,
                  beta, eps, mode, center):
    """Partition features of one pattern and print segments plus scores."""
    try:
        ds = _load_patterns(dataset, images, labels)
        model = load_model(model_path)
    except IntrelError as exc:
        raise _runtime(exc)
    if not 0 <= pattern_id < ds.n_patterns:
        raise click.UsageError(f"pattern {pattern_id} outside 0..{ds.n_patterns - 1}")
    if feature != "all":
        try:
            features = [int(feature)]
        except ValueError:
            raise click.UsageError(f"--feature must be an index or 'all', got {feature!r}")
        if not 0 <= features[0] < ds.n_features:
            raise click.UsageError(f"feature {features[0]} outside 0..{ds.n_features - 1}")
    else:
        features = list(range(ds.n_features))
    if node is not None and not 0 <= node < model.output_dim:
        raise click.UsageError(f"node {node} outside 0..{model.output_dim - 1}")
    try:
        x = ds.patterns[pattern_id]
        if node is None:
            node = int(np.argmax(forward(model, x)))
        spec = OutputSpec(node=node, center=center, radius=beta, mode=TargetMode(mode))
        click.echo("pattern_id,feature,lo,hi,family")
        parts = []
        for k in features:
            part = query_feature(
                model, FeatureQuery(pattern=x, feature=k, spec=spec, eps=eps)
            )
            parts.append((k, part))
            for iv, fam in part.segments:
                click.echo(f"{pattern_id},{k},{iv.lo:.17g},{iv.hi:.17g},{fam}")
        click.echo("")
        click.echo("pattern_id,feature,mu_A,mu_U,mu_k,R,rule")
        for k, part in parts:
            s = relevance_score(part)
            click.echo(
                f"{pattern_id},{k},{s.mu_A:.17g},{s.mu_U:.17g},{s.mu_k:.17g},"
                f"{s.value:.17g},{s.rule_applied}"
            )
    except IntrelError as exc:
        raise _runtime(exc)


@main.command(name="map")
@data_options
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_index", required=True, type=int)
@click.option("--beta", default=0.2, show_default=True)
@click.option("--eps", default=1e-3, show_default=True)
@click.option("--out", "out_prefix", required=True, help="output path prefix")
@click.option("--include-inactive", is_flag=True, help="also map targets [0, beta] per other output")
@click.option("--workers", type=int, default=None, help="process pool size [default: cpu count]")
def cmd_map(dataset, images, labels, model_path, class_index, beta, eps, out_prefix,
            include_inactive, workers):
    """Render per-feature relevance maps for every pattern of a class."""
    try:
        ds = _load_patterns(dataset, images, labels)
        model = load_model(model_path)
    except IntrelError as exc:
        raise _runtime(exc)
    if not 0 <= class_index < model.output_dim:
        raise click.UsageError(f"class {class_index} outside 0..{model.output_dim - 1}")
    workers = workers if workers is not None else default_workers()
    try:
        rmap = relevance_map(
            model, ds, class_index, beta=beta, eps=eps, workers=workers
        )
        for k in range(ds.n_features):
            image = partition_image([row.partitions[k] for row in rmap.rows], MAP_WIDTH)
            write_ppm(f"{out_prefix}_feature{k}.ppm", image)
        write_scores_csv(rmap, f"{out_prefix}_scores.csv")
        write_segments_csv(rmap, f"{out_prefix}_segments.csv")
        if include_inactive:
            ids = [row.pattern_id for row in rmap.rows]
            for other in range(model.output_dim):
                if other == class_index:
                    continue
                spec = OutputSpec(node=other, center=0.0, radius=beta)
                per_pattern = [
                    analyze_features(model, ds.patterns[i], spec, eps, workers=1)
                    for i in ids
                ]
                for k in range(ds.n_features):
                    image = partition_image([parts[k] for parts in per_pattern], MAP_WIDTH)
                    write_ppm(f"{out_prefix}_inactive_out{other}_feature{k}.ppm", image)
        click.echo(
            f"wrote {ds.n_features} map image(s) for class {class_index} "
            f"({len(rmap.rows)} patterns) with prefix {out_prefix}"
        )
    except IntrelError as exc:
        raise _runtime(exc)


def heat_eps_policy(v: float) -> tuple[Interval, float]:
    """Target interval and resolution for one heat query.

    The output interval is [v, 1] (or [0.9999, 1] when the output
    saturates at 1).  The resolution follows the shipped anchor points
    (0.995 -> 1e-5, 1.0 -> 1e-6): proportional to the interval width up
    to 0.995, geometrically interpolated above it, floored at 1e-6.
    """
    if v >= 1.0:
        return Interval(0.9999, 1.0), 1e-6
    if v <= 0.995:
        return Interval(v, 1.0), max((1.0 - v) * 2e-3, 1e-6)
    t = (v - 0.995) / 0.005
    return Interval(v, 1.0), max(10.0 ** (-5.0 - t), 1e-6)


@main.command(name="heat")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--images", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--labels", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--index", required=True, type=int, help="image index in the file")
@click.option("--eps", type=float, default=None, help="override the resolution policy")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="output image (.ppm); scores CSV lands next to it")
@click.option("--workers", type=int, default=None, help="process pool size [default: cpu count]")
def cmd_heat(model_path, images, labels, index, eps, out_path, workers):
    """Per-pixel relevance of one correctly classified image, as a heat map."""
    try:
        ds = load_mnist(images, labels)
        model = load_model(model_path)
    except IntrelError as exc:
        raise _runtime(exc)
    if not 0 <= index < ds.n_patterns:
        raise click.UsageError(f"index {index} outside 0..{ds.n_patterns - 1}")
    workers = workers if workers is not None else default_workers()
    try:
        x = ds.patterns[index]
        outputs = forward(model, x)
        predicted = int(np.argmax(outputs))
        actual = int(ds.labels[index])
        if predicted != actual:
            raise MisclassifiedInput(
                f"image {index} is misclassified: predicted class "
                f"{model.class_coding[predicted]}, labelled {ds.class_names[actual]}"
            )
        v = float(outputs[predicted])
        target, policy_eps = heat_eps_policy(v)
        eps = eps if eps is not None else policy_eps
        spec = OutputSpec(node=predicted, center=1.0, radius=1.0 - target.lo)
        partitions = analyze_features(model, x, spec, eps, workers=workers)
        scores = [relevance_score(p) for p in partitions]
        values = np.array([s.value for s in scores])
        side = int(math.isqrt(len(values)))
        if side * side != len(values):
            raise click.ClickException(f"{len(values)} features do not form a square image")
        write_ppm(out_path, heat_image(values, side))
        csv_path = str(out_path)
        csv_path = csv_path[:-4] + ".csv" if csv_path.endswith(".ppm") else csv_path + ".csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pattern_id", "feature", "mu_A", "mu_U", "mu_k", "R", "rule"])
            for k, s in enumerate(scores):
                writer.writerow(
                    [index, k, f"{s.mu_A:.17g}", f"{s.mu_U:.17g}", f"{s.mu_k:.17g}",
                     f"{s.value:.17g}", s.rule_applied]
                )
        click.echo(
            f"heat map for image {index} (class {model.class_coding[predicted]}, "
            f"output {v:.6f}, eps {eps:g}) -> {out_path}"
        )
    except IntrelError as exc:
        raise _runtime(exc)


@main.command(name="augment")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--count", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def cmd_augment(dataset, count, seed, out_path):
    """Append uniformly random features to a dataset and save it."""
    try:
        ds = load_dataset_csv(dataset)
        aug = augment_random_features(ds, count, seed)
        save_dataset_csv(aug, out_path)
        click.echo(f"wrote {aug.n_patterns}x{aug.n_features} dataset to {out_path}")
    except IntrelError as exc:
        raise _runtime(exc)


if __name__ == "__main__":
    main()
