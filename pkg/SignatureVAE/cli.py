"""Command line entry point: ``sigvae <command> [options]``.

Every command writes its artifacts under ``--out`` together with a
``run_manifest.json`` listing the config hash, the seed and every file it
produced. Exit codes: 0 success, 1 runtime failure, 2 usage or config
error.
"""
import argparse
import logging
import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from . import __version__  # noqa: E402
from .config import ConfigError, load_config  # noqa: E402
from .diagnostics import (  # noqa: E402
    all_traversals,
    average_loss_history,
    beta_sweep,
    collapse_report,
    data_size_experiment,
    fit_perplexity,
    pca_2d,
    tsne_2d,
    write_beta_sweep,
    write_collapse_report,
    write_embedding_csv,
    write_traversals,
)
from .image import (  # noqa: E402
    EmptyManifestError,
    Manifest,
    ManifestRow,
    augment_manifest,
    load_image,
    preprocess,
    read_manifest,
    save_image,
)
from .learning.features import extract_features  # noqa: E402
from .learning.vae import (  # noqa: E402
    load_checkpoint,
    read_history_csv,
    save_checkpoint,
    write_history_csv,
)
from .model_systems import SignatureSystem, write_dataset  # noqa: E402
from .optimizer import train  # noqa: E402
from .plots import (  # noqa: E402
    loss_breakdown_plot,
    plot_embedding,
    plot_roc,
    plot_traversals,
    save_figure,
)
from .protocol import compare_betas, run_protocol, write_beta_comparison  # noqa: E402
from .utils import config_hash, spawn_generator, write_json  # noqa: E402

logger = logging.getLogger("SignatureVAE")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class CommandFailed(RuntimeError):
    """Raised by a command that finished but could not process every input."""


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated numbers, got %r"
                                         % text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sigvae",
        description="One-class signature forgery detection with beta-VAEs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="overrides the config seed")
    common.add_argument("--out", help="output directory")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("preprocess", parents=[common],
                       help="binarize, pad and resize every manifest image")
    p.add_argument("--manifest")
    p.add_argument("--target-size", type=int)
    p.add_argument("--no-pad", action="store_true")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("augment", parents=[common],
                       help="add randomly transformed copies of every image")
    p.add_argument("--manifest")
    p.add_argument("--copies", type=int)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("synth", parents=[common],
                       help="render a synthetic signature dataset")
    p.add_argument("--identities", type=int)
    p.add_argument("--genuine", type=int)
    p.add_argument("--forged", type=int)
    p.add_argument("--forgery", choices=("random", "skilled"))
    p.add_argument("--jitter", type=float)
    p.add_argument("--size", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", parents=[common], help="train a VAE")
    p.add_argument("--manifest")
    p.add_argument("--one-class", dest="one_class", action="store_true",
                   default=True, help="train on genuine rows only (default)")
    p.add_argument("--all-rows", dest="one_class", action="store_false",
                   help="train on every row")
    _add_vae_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", parents=[common],
                       help="run the per-identity classification protocol")
    p.add_argument("--manifest")
    p.add_argument("--mode", choices=("latent", "recon", "both"), action="append",
                   help="feature mode, repeatable (default: all)")
    p.add_argument("--betas", type=_float_list,
                   help="compare KL weights, e.g. 1,0.001")
    _add_vae_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("traverse", parents=[common],
                       help="latent traversals of a checkpoint or a beta sweep")
    p.add_argument("--manifest")
    p.add_argument("--checkpoint")
    p.add_argument("--betas", type=_float_list)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--steps", type=int)
    _add_vae_flags(p)
    p.set_defaults(func=cmd_traverse)

    p = sub.add_parser("diagnose", parents=[common],
                       help="posterior collapse report and loss breakdown")
    p.add_argument("--manifest")
    p.add_argument("--checkpoint")
    p.add_argument("--history", help="history CSV (default: next to checkpoint)")
    p.add_argument("--threshold", type=float)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("embed", parents=[common],
                       help="2-D embedding of the latent means")
    p.add_argument("--manifest")
    p.add_argument("--checkpoint")
    p.add_argument("--method", choices=("tsne", "pca"))
    p.add_argument("--perplexity", type=float)
    p.add_argument("--iterations", type=int)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("datasize", parents=[common],
                       help="train on a large and a small genuine set and compare")
    p.add_argument("--manifest")
    p.add_argument("--small", type=int, help="images in the small training set")
    p.add_argument("--heldout-fraction", type=float)
    p.add_argument("--samples", type=int, help="prior samples per model")
    _add_vae_flags(p)
    p.set_defaults(func=cmd_datasize)
    return parser


def _add_vae_flags(p):
    p.add_argument("--epochs", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--latent-dim", type=int)
    p.add_argument("--intermediate-dim", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--anneal-epochs", type=int,
                   help="ramp the KL weight linearly over this many epochs")


def _vae_overrides(args):
    overrides = {
        "vae.epochs": getattr(args, "epochs", None),
        "vae.beta": getattr(args, "beta", None),
        "vae.latent_dim": getattr(args, "latent_dim", None),
        "vae.intermediate_dim": getattr(args, "intermediate_dim", None),
        "vae.batch_size": getattr(args, "batch_size", None),
        "vae.learning_rate": getattr(args, "learning_rate", None),
    }
    if getattr(args, "anneal_epochs", None):
        overrides["vae.anneal"] = "linear"
        overrides["vae.anneal_epochs"] = args.anneal_epochs
    return overrides


# Config field set by each command flag, when the command has that flag.
FLAG_FIELDS = {
    "target_size": "preprocess.target_size",
    "copies": "augment.copies_per_image",
    "identities": "synth.n_identities",
    "genuine": "synth.genuine_per_id",
    "forged": "synth.forged_per_id",
    "forgery": "synth.forgery",
    "jitter": "synth.jitter",
    "size": "synth.size",
    "lo": "diagnostics.lo",
    "hi": "diagnostics.hi",
    "steps": "diagnostics.steps",
    "threshold": "diagnostics.collapse_threshold",
    "method": "diagnostics.method",
    "perplexity": "diagnostics.perplexity",
    "iterations": "diagnostics.iterations",
    "small": "diagnostics.small_size",
    "heldout_fraction": "diagnostics.heldout_fraction",
    "samples": "diagnostics.prior_samples",
}


def _load_run_config(args):
    """The config file with every command-line flag applied on top, so the
    run manifest records the settings actually used."""
    config = load_config(args.config)
    overrides = {
        "seed": args.seed,
        "out": args.out,
        "manifest": getattr(args, "manifest", None),
        "checkpoint": getattr(args, "checkpoint", None),
    }
    for flag, dotted in FLAG_FIELDS.items():
        overrides[dotted] = getattr(args, flag, None)
    if getattr(args, "no_pad", False):
        overrides["preprocess.pad_before_resize"] = False
    if args.command == "traverse":
        overrides["diagnostics.betas"] = args.betas
    if args.command == "eval":
        overrides["classifier.modes"] = args.mode
    overrides.update(_vae_overrides(args))
    return config.with_overrides(**overrides)


def _read_manifest(config):
    config.check_paths("manifest")
    manifest = read_manifest(config.manifest)
    if len(manifest) == 0:
        raise EmptyManifestError("empty manifest")
    return manifest


def cmd_preprocess(args, config):
    manifest = _read_manifest(config)
    cfg = config.preprocess_config()
    rows, written, failed = [], [], []
    for i, row in enumerate(manifest.rows):
        rel = os.path.splitext(row.path)[0] + ".pgm"
        target = os.path.join(config.out, rel)
        try:
            img = preprocess(load_image(manifest.resolve(i)), cfg)
            os.makedirs(os.path.dirname(target), exist_ok=True)
            written.append(save_image(target, img))
        except (OSError, ValueError) as err:
            logger.error("Failed to preprocess %s: %s", row.path, err)
            failed.append(row.path)
            continue
        rows.append(ManifestRow(rel, row.identity, row.label))
    written.append(Manifest(rows).write(os.path.join(config.out, "manifest.csv")))
    if failed:
        raise CommandFailed("%d of %d images failed" % (len(failed), len(manifest)),
                            written)
    return written


def cmd_augment(args, config):
    manifest = _read_manifest(config)
    out_manifest = augment_manifest(manifest, config.augment_config(), config.seed,
                                    config.out)
    written = [os.path.join(config.out, row.path) for row in out_manifest.rows]
    written.append(out_manifest.write(os.path.join(config.out, "manifest.csv")))
    return written


def cmd_synth(args, config):
    cfg = config.synth_config()
    system = SignatureSystem(forgery=cfg.forgery_spec(), size=cfg.size)
    manifest = system.make_dataset(cfg.n_identities, cfg.genuine_per_id,
                                   cfg.forged_per_id, config.seed)
    return write_dataset(manifest, config.out)


def cmd_train(args, config):
    manifest = _read_manifest(config)
    X = manifest.matrix(manifest.indices(label="genuine" if args.one_class else None))
    cfg = config.vae_config(input_dim=X.shape[1])
    params, history = train(X, cfg, verbose=args.verbose)
    written = save_checkpoint(os.path.join(config.out, "model.svae"), params, history)
    written.append(write_history_csv(os.path.join(config.out, "history.csv"), history))
    if history:
        written.extend(loss_breakdown_plot(
            history, os.path.join(config.out, "loss_breakdown.svg")))
    return written


def cmd_eval(args, config):
    manifest = _read_manifest(config)
    input_dim = manifest.matrix([0]).shape[1]
    vae_cfg = config.vae_config(input_dim=input_dim)
    clf_cfg = config.classifier_config()
    if args.betas:
        reports = compare_betas(manifest, vae_cfg, betas=args.betas,
                                split_seed=config.seed, clf_cfg=clf_cfg)
        return write_beta_comparison(reports, config.out)
    report = run_protocol(manifest, vae_cfg, split_seed=config.seed,
                          clf_cfg=clf_cfg)
    written = report.write(config.out)
    written.extend(write_eval_figures(report, config.out))
    return written


def write_eval_figures(report, outdir):
    """Per-identity loss histories, their averaged breakdown and one ROC
    figure per mode and classifier."""
    written = report.write_histories(outdir)
    histories = [h for h in report.histories.values() if h]
    if histories:
        written.extend(loss_breakdown_plot(
            average_loss_history(histories),
            os.path.join(outdir, "loss_breakdown.svg")))
    for mode, clf in report.keys():
        curves = {
            result.identity: result.reports[(mode, clf)]
            for result in report.evaluated if (mode, clf) in result.reports
        }
        if not any(rep.auc is not None for rep in curves.values()):
            continue
        fig, ax = plt.subplots(figsize=(5, 5))
        try:
            plot_roc(curves, ax=ax, title="ROC, %s features, %s" % (mode, clf))
            written.append(save_figure(
                fig, os.path.join(outdir, "roc_%s_%s.svg" % (mode, clf))))
        finally:
            plt.close(fig)
    return written


def cmd_traverse(args, config):
    diag = config.diagnostics_config()
    if config.checkpoint and not args.betas:
        config.check_paths("checkpoint")
        params = load_checkpoint(config.checkpoint)
        grids = all_traversals(params, diag.lo, diag.hi, diag.steps)
        written = write_traversals(grids, config.out)
        fig = plot_traversals(grids)
        try:
            written.append(save_figure(fig, os.path.join(config.out, "traversal.svg")))
        finally:
            plt.close(fig)
        return written
    manifest = _read_manifest(config)
    X = manifest.matrix(manifest.indices(label="genuine"))
    results = beta_sweep(X, config.vae_config(input_dim=X.shape[1]),
                         betas=diag.betas, lo=diag.lo, hi=diag.hi, steps=diag.steps)
    return write_beta_sweep(results, config.out)


def cmd_diagnose(args, config):
    diag = config.diagnostics_config()
    config.check_paths("checkpoint")
    manifest = _read_manifest(config)
    params = load_checkpoint(config.checkpoint)
    history_path = args.history or os.path.join(
        os.path.dirname(os.path.abspath(config.checkpoint)), "history.csv")
    history = read_history_csv(history_path) if os.path.exists(history_path) else []
    if not history:
        logger.warning("No loss history found at %s", history_path)
    report = collapse_report(params, manifest, history,
                             threshold=diag.collapse_threshold)
    logger.info("%d of %d latent dimensions collapsed", report.n_collapsed,
                len(report.per_dim_kl))
    written = [write_collapse_report(os.path.join(config.out, "collapse.json"), report)]
    if history:
        written.extend(loss_breakdown_plot(
            history, os.path.join(config.out, "loss_breakdown.svg")))
    return written


def cmd_embed(args, config):
    diag = config.diagnostics_config()
    config.check_paths("checkpoint")
    manifest = _read_manifest(config)
    params = load_checkpoint(config.checkpoint)
    features = extract_features(params, manifest, mode="latent")
    if diag.method == "tsne":
        perplexity = fit_perplexity(diag.perplexity, len(features.latent))
        Y = tsne_2d(features.latent, perplexity=perplexity,
                    iterations=diag.iterations, rng=config.seed)
    else:
        Y = pca_2d(features.latent)
    labels = [row.label for row in manifest.rows]
    os.makedirs(config.out, exist_ok=True)
    written = [write_embedding_csv(os.path.join(config.out, "embedding.csv"),
                                   features.paths, labels, Y)]
    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        plot_embedding(Y, manifest.labels, ax=ax,
                       title="%s of the latent means" % diag.method.upper())
        written.append(save_figure(fig, os.path.join(config.out, "embedding.svg")))
    finally:
        plt.close(fig)
    return written


def cmd_datasize(args, config):
    diag = config.diagnostics_config()
    manifest = _read_manifest(config)
    genuine = manifest.indices(label="genuine")
    order = [int(i) for i in spawn_generator(config.seed, 0).permutation(genuine)]
    n_heldout = max(1, int(round(diag.heldout_fraction * len(order))))
    heldout, training = order[:n_heldout], order[n_heldout:]
    if not 0 < diag.small_size < len(training):
        raise ConfigError(
            "diagnostics.small_size",
            "expected below the %d genuine training images, got %d"
            % (len(training), diag.small_size))
    large = manifest.matrix(training)
    result = data_size_experiment(
        large, manifest.matrix(training[:diag.small_size]), manifest.matrix(heldout),
        config.vae_config(input_dim=large.shape[1]),
        n_samples=diag.prior_samples, rng=spawn_generator(config.seed, 1))
    logger.info("Held-out reconstruction: %.4f on %d images, %.4f on %d",
                result.heldout_recon_large, result.n_large,
                result.heldout_recon_small, result.n_small)
    return [write_json(os.path.join(config.out, "data_size.json"), result.to_dict())]


def write_run_manifest(args, config, written):
    out = os.path.abspath(config.out)
    files = sorted({
        os.path.relpath(os.path.abspath(path), out).replace(os.sep, "/")
        for path in written
    })
    doc = config.to_dict()
    return write_json(os.path.join(out, "run_manifest.json"), {
        "command": args.command,
        "config": doc,
        "config_hash": config_hash(doc),
        "seed": config.seed,
        "files": files,
    })


def configure_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        config = _load_run_config(args)
        if not config.out:
            raise ConfigError("out", "required")
        os.makedirs(config.out, exist_ok=True)
        written = args.func(args, config)
    except ConfigError as err:
        logger.error("config error: %s", err)
        return EXIT_USAGE
    except EmptyManifestError as err:
        logger.error("%s", err)
        return EXIT_USAGE
    except CommandFailed as err:
        logger.error("%s", err.args[0])
        write_run_manifest(args, config, err.args[1])
        return EXIT_FAILURE
    except Exception as err:
        logger.error("%s failed: %s", args.command, err)
        logger.debug("Traceback", exc_info=True)
        return EXIT_FAILURE
    write_run_manifest(args, config, written)
    logger.info("Wrote %d files to %s", len(written), config.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
