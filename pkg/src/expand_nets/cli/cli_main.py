"""Provides the expand-nets command line entry point"""

import argparse
import sys
from enum import IntEnum
from typing import Callable

from expand_nets.cli.cli_commands import cmd_build, cmd_compress, cmd_eval, cmd_expand, cmd_train, cmd_verify
from expand_nets.utils.errors import CompressionError, ExpansionError, FormatError, ShapeError, VerificationError
from expand_nets.utils.logger import logger, set_verbosity


class ExitCode(IntEnum):
    """Process exit codes"""

    SUCCESS = 0
    USAGE = 2
    DATA = 3
    VERIFICATION = 4


def _add_dataset_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--dataset", choices=["cifar10", "cifar100", "synthetic"], default="cifar10")
    parser.add_argument("--data-dir", help="dataset directory, defaults to $EXPANDNET_DATA_DIR")
    parser.add_argument("--subset", type=int, help="stratified train subset size")
    parser.add_argument("--synthetic-size", type=int, default=1000, help="train samples of the synthetic dataset")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    """Creates the argument parser with all sub commands"""
    parser = argparse.ArgumentParser(prog="expand-nets",
                                     description="Expand compact CNNs into linear chains, train, compress and verify")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log debug messages")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="write a freshly initialized zoo model")
    build.add_argument("arch", help="architecture id, e.g. smallnet7-3conv-c10")
    build.add_argument("model_out")
    build.add_argument("--seed", type=int, default=0)
    build.set_defaults(handler=cmd_build)

    expand = sub.add_parser("expand", help="expand a compact model")
    expand.add_argument("model_in", help="model manifest or architecture id")
    expand.add_argument("model_out")
    expand.add_argument("--fc", action="store_true", help="expand fully-connected layers")
    expand.add_argument("--cl", action="store_true", help="expand convolutions into 1x1, kxk, 1x1")
    expand.add_argument("--ck", action="store_true", help="expand kxk convolutions into 3x3 chains")
    expand.add_argument("--rate", type=int, default=4)
    expand.add_argument("--depth", type=int, default=3, help="fully-connected chain depth")
    expand.add_argument("--table1-channels", "--keep-input-channels", dest="keep_input_channels", action="store_true",
                        help="keep the input channels of the first convolution")
    expand.add_argument("--seed", type=int, default=0)
    expand.set_defaults(handler=cmd_expand)

    train = sub.add_parser("train", help="train a model")
    train.add_argument("model_in", help="model manifest or architecture id")
    train.add_argument("model_out")
    _add_dataset_arguments(train)
    train.add_argument("--epochs", type=int, default=150)
    train.add_argument("--batch-size", type=int, default=128)
    train.add_argument("--lr", type=float, default=0.01)
    train.add_argument("--momentum", type=float, default=0.9)
    train.add_argument("--weight-decay", type=float, default=0.0)
    train.add_argument("--milestones", default="50,100", help="comma separated epochs of learning rate decay")
    train.add_argument("--lr-decay", type=float, default=0.1)
    train.add_argument("--no-augment", action="store_true")
    train.add_argument("--init-from-counterpart", action="store_true",
                       help="train the nonlinear counterpart first and copy its weights")
    train.add_argument("--counterpart-epochs", type=int, help="defaults to --epochs")
    train.add_argument("--counterpart-slope", type=float, help="use LeakyReLU with this slope in the counterpart")
    train.add_argument("--report", help="JSONL training report path")
    train.set_defaults(handler=cmd_train)

    compress = sub.add_parser("compress", help="collapse expansion units of a trained model")
    compress.add_argument("model_in")
    compress.add_argument("model_out")
    compress.set_defaults(handler=cmd_compress)

    verify = sub.add_parser("verify", help="compare outputs of two models on random inputs")
    verify.add_argument("model_a")
    verify.add_argument("model_b")
    verify.add_argument("--trials", type=int, default=10)
    verify.add_argument("--tol", type=float, default=1e-4)
    verify.add_argument("--float64", action="store_true", help="compare in double precision")
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(handler=cmd_verify)

    evaluation = sub.add_parser("eval", help="print top-1 accuracy on the eval split")
    evaluation.add_argument("model_in", help="model manifest or architecture id")
    _add_dataset_arguments(evaluation)
    evaluation.set_defaults(handler=cmd_eval)
    return parser


def _run(handler: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    try:
        return handler(args)
    except VerificationError as e:
        logger().error("Verification failed: %s", e)
        return ExitCode.VERIFICATION
    except (FormatError, CompressionError, ShapeError, FileNotFoundError) as e:
        logger().error("%s", e)
        return ExitCode.DATA
    except (ExpansionError, ValueError) as e:
        logger().error("%s", e)
        return ExitCode.USAGE


def main(argv: list[str] | None = None) -> int:
    """Parses arguments and runs the selected command, returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCode.SUCCESS if e.code == 0 else ExitCode.USAGE

    if args.verbose or args.quiet:
        set_verbosity(args.verbose, args.quiet)
    return int(_run(args.handler, args))


if __name__ == "__main__":
    sys.exit(main())
