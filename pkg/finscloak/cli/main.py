"""
命令行入口

    finscloak validate [--config cfg.json] [--override fd.h_x=0.1]
    finscloak trace    [--config cfg.json] [--out results/]
    finscloak field    [--config cfg.json] [--out results/]
    finscloak plot     [trajectories.csv] [--config cfg.json] [--out results/]

退出码：0 成功，1 检查失败，2 用法或配置错误，3 I/O 错误。
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from finscloak.cli.checks import run_checks
from finscloak.cli.config import FileConfigSource, ScenarioConfig, describe_defaults, load_config
from finscloak.cli.io import (
    read_trajectories,
    render_svg,
    write_material_field,
    write_report,
    write_svg,
    write_trajectories,
)
from finscloak.core.exceptions import DomainError, FinsCloakError, InvalidConfigError, TrajectoryFormatError
from finscloak.medium.materials import sample_material_field
from finscloak.scenarios.shield import analyze_shielding, build_asymmetric_shield, trace_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _output_path(args: argparse.Namespace, name: str) -> Path:
    return Path(args.out) / name


def cmd_validate(args: argparse.Namespace, config: ScenarioConfig) -> int:
    """运行内置检查，任何一项失败返回 1"""
    results = run_checks(config)
    for result in results:
        print(result.line())
    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_trace(args: argparse.Namespace, config: ScenarioConfig) -> int:
    """追踪光线扇区，写出轨迹 CSV 与报告 JSON"""
    scenario = config.to_scenario()
    trajectories = trace_scenario(scenario, config.fans(), workers=config.integrator.workers)
    report = analyze_shielding(trajectories, scenario)
    write_trajectories(_output_path(args, config.output.trajectories), trajectories)
    write_report(_output_path(args, config.output.report), report.to_dict())
    print(f"traced {len(trajectories)} ray(s): pass_straight={report.pass_straight} blocked={report.blocked}")
    return EXIT_OK


def cmd_field(args: argparse.Namespace, config: ScenarioConfig) -> int:
    """导出方向分箱的材料场"""
    metric = build_asymmetric_shield(config.to_scenario())
    result = sample_material_field(
        metric,
        config.grid(),
        bins=config.field.direction_bins,
        impedance=config.scenario.impedance,
        r_guard=config.field.r_guard,
    )
    write_material_field(_output_path(args, config.output.field), result)
    print(f"wrote {len(result)} sample(s), clipped={result.clipped} failed={result.failed}")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, config: ScenarioConfig) -> int:
    """把轨迹 CSV 画成 SVG"""
    source = Path(args.trajectories) if args.trajectories else _output_path(args, config.output.trajectories)
    rays = read_trajectories(source)
    svg = render_svg(rays, config.scenario.shield_radius, config.scenario.device_radius)
    target = write_svg(_output_path(args, config.output.plot), svg)
    print(f"plotted {len(rays)} ray(s) to {target}")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "trace": cmd_trace,
    "field": cmd_field,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON 配置文件路径，缺省时使用默认配置")
    common.add_argument("--out", default=".", help="输出目录（默认当前目录）")
    common.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="覆盖配置项，值按 JSON 解析，可重复",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="只输出警告与错误")

    parser = argparse.ArgumentParser(
        prog="finscloak",
        description="Finsler 非对称隐身屏蔽：度量设计、材料导出与光线追踪",
        epilog="配置默认值:\n" + describe_defaults(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("validate", parents=[common], help="运行内置不变量检查")
    subparsers.add_parser("trace", parents=[common], help="追踪光线并写出轨迹与报告")
    subparsers.add_parser("field", parents=[common], help="导出材料场")
    plot = subparsers.add_parser("plot", parents=[common], help="把轨迹 CSV 画成 SVG")
    plot.add_argument("trajectories", nargs="?", help="轨迹 CSV，缺省取输出目录中的轨迹文件")
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """
    命令行主函数

    Args:
        argv: 参数列表，默认取 sys.argv[1:]

    Returns:
        退出码
    """
    args = build_parser().parse_args(argv)
    configure_logging(args)

    try:
        source = FileConfigSource(args.config) if args.config else None
        config = load_config(source, args.override)
        return COMMANDS[args.command](args, config)
    except InvalidConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        for key, reason in sorted(exc.errors.items()):
            print(f"  {key}: {reason}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrajectoryFormatError as exc:
        print(f"{exc.path}:{exc.line}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FinsCloakError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
