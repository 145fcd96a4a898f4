from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from contextlib import ExitStack
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, TextIO

import numpy as np

from ..config import Caps, Settings, get_settings
from ..database import create_session_factory, get_session
from ..errors import GelfandScopeError, UsageError
from ..repositories import CharacterTableRepository
from ..services import gelfand, suzuki
from ..services.chartab import character_table
from ..services.corpus import corpus_summary, dump_group, load_group_input
from ..services.groups import Group, SubgroupEmbedding, subgroup_embed
from .reports import FORMATS, render

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    command: str
    subcommand: Optional[str]
    caps: Caps
    fmt: str = "json"
    prime: Optional[int] = None
    timings: bool = True
    cache_url: Optional[str] = None
    group: Optional[str] = None
    subgroup_gens: Optional[str] = None
    options: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> "RunConfig":
        try:
            caps = settings.caps().merged(
                closure=args.closure_cap,
                lattice=args.lattice_cap,
                oracle=args.oracle_cap,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.prime is not None and args.prime < 2:
            raise UsageError(f"Prime override must be at least 2, got {args.prime}")
        known = {
            "command", "subcommand", "handler", "format", "prime", "no_timings", "cache",
            "group", "subgroup_gens", "closure_cap", "lattice_cap", "oracle_cap", "log_level",
        }
        fmt = args.format
        if getattr(args, "pretty", False):
            fmt = "pretty"
        return cls(
            command=args.command,
            subcommand=getattr(args, "subcommand", None),
            caps=caps,
            fmt=fmt,
            prime=args.prime,
            timings=not args.no_timings,
            cache_url=args.cache or settings.cache_url,
            group=getattr(args, "group", None),
            subgroup_gens=getattr(args, "subgroup_gens", None),
            options={k: v for k, v in vars(args).items() if k not in known},
        )


def parse_group_input(source: str, cap: int) -> Group:
    return load_group_input(source, cap=cap)


def parse_subgroup_generators(group: Group, raw: Optional[str]) -> list[np.ndarray]:
    if not raw:
        raise UsageError("--subgroup-gens is required")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--subgroup-gens is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, list) or not all(isinstance(item, list) for item in data):
        raise UsageError("--subgroup-gens must be a JSON list of generators")
    generators = []
    for position, item in enumerate(data):
        try:
            generators.append(group.kind.coerce(item))
        except UsageError as exc:
            raise UsageError(f"Subgroup generator {position}: {exc}") from exc
    return generators


class CliApp:
    """Command tree plus handlers; ``run`` maps errors to exit codes."""

    def __init__(self, settings: Settings | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> None:
        self.settings = settings
        self.stdout = stdout
        self.stderr = stderr
        self.parser = argparse.ArgumentParser(
            prog="gelfand-scope",
            description="Сильные пары Гельфанда, таблицы характеров и группы Судзуки",
        )
        self._repository: Optional[CharacterTableRepository] = None

    def _common(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=FORMATS, default="json", help="Формат отчёта")
        common.add_argument("--prime", type=int, default=None, help="Простое p для метода Диксона")
        common.add_argument("--closure-cap", type=int, default=None, help="Предел размера замыкания")
        common.add_argument("--lattice-cap", type=int, default=None, help="Предел порядка для решётки подгрупп")
        common.add_argument("--oracle-cap", type=int, default=None, help="Предел порядка для оракулов")
        common.add_argument("--cache", default=None, help="URL кэша таблиц характеров (SQLAlchemy)")
        common.add_argument("--no-timings", action="store_true", help="Не выводить время работы")
        common.add_argument("--log-level", default=None, help="Уровень логирования")
        return common

    def setup_commands(self) -> None:
        common = self._common()
        commands = self.parser.add_subparsers(dest="command", required=True)

        def group_args(parser: argparse.ArgumentParser, subgroup: bool = False) -> None:
            parser.add_argument("--group", required=True, help="JSON группы, путь к файлу или имя из корпуса")
            if subgroup:
                parser.add_argument("--subgroup-gens", required=True, help="JSON-список образующих подгруппы")

        suzuki_parser = commands.add_parser("suzuki", help="Построение Sz(q)")
        suzuki_commands = suzuki_parser.add_subparsers(dest="subcommand", required=True)
        build = suzuki_commands.add_parser("build", parents=[common], help="Sz(2^m) и сертификат")
        build.add_argument("--m", type=int, required=True)
        build.add_argument("--perm", action="store_true", help="Перестановочная форма на овоиде")
        build.set_defaults(handler=self.suzuki_build)
        sub = suzuki_commands.add_parser("subgroup", parents=[common], help="Максимальная подгруппа Sz(q)")
        sub.add_argument("--m", type=int, required=True)
        sub.add_argument("--which", choices=suzuki.MAXIMAL_FAMILIES, required=True)
        sub.add_argument("--matrix", action="store_true", help="Матричная форма вместо перестановочной")
        sub.set_defaults(handler=self.suzuki_subgroup)

        table = commands.add_parser("table", parents=[common], help="Таблица характеров")
        group_args(table)
        table.add_argument("--pretty", action="store_true")
        table.set_defaults(handler=self.table)

        classes = commands.add_parser("classes", parents=[common], help="Классы сопряжённости")
        group_args(classes)
        classes.set_defaults(handler=self.classes)

        sgp_parser = commands.add_parser("sgp", help="Сильные пары Гельфанда")
        sgp_commands = sgp_parser.add_subparsers(dest="subcommand", required=True)
        check = sgp_commands.add_parser("check", parents=[common])
        group_args(check, subgroup=True)
        check.add_argument("--force-full", action="store_true", help="Всегда считать полную матрицу")
        check.set_defaults(handler=self.sgp_check)
        scan = sgp_commands.add_parser("scan", parents=[common])
        target = scan.add_mutually_exclusive_group(required=True)
        target.add_argument("--group")
        target.add_argument("--suzuki-m", type=int)
        scan.set_defaults(handler=self.sgp_scan)

        gelfand_parser = commands.add_parser("gelfand", help="Пары Гельфанда")
        gelfand_commands = gelfand_parser.add_subparsers(dest="subcommand", required=True)
        gcheck = gelfand_commands.add_parser("check", parents=[common])
        group_args(gcheck, subgroup=True)
        gcheck.set_defaults(handler=self.gelfand_check)

        oracle_parser = commands.add_parser("oracle", help="Прямые проверки без таблиц характеров")
        oracle_commands = oracle_parser.add_subparsers(dest="subcommand", required=True)
        for name in ("schur", "doublecosets", "hecke"):
            oracle = oracle_commands.add_parser(name, parents=[common])
            group_args(oracle, subgroup=True)
            oracle.set_defaults(handler=self.oracle)

        formula_parser = commands.add_parser("formula", help="Формулы для Sz(q0)")
        formula_commands = formula_parser.add_subparsers(dest="subcommand", required=True)
        total = formula_commands.add_parser("sz-total", parents=[common])
        total.add_argument("--q0", type=int, required=True)
        total.add_argument("--r", type=int, default=None, help="Проверить q^2+1 >= полной степени для q = q0^r")
        total.set_defaults(handler=self.formula_sz_total)

        corpus_parser = commands.add_parser("corpus", help="Встроенные группы")
        corpus_commands = corpus_parser.add_subparsers(dest="subcommand", required=True)
        listing = corpus_commands.add_parser("list", parents=[common])
        listing.set_defaults(handler=self.corpus_list)

    # Entry point

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        stdout = self.stdout or sys.stdout
        stderr = self.stderr or sys.stderr
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if args.log_level:
            level = logging.getLevelName(args.log_level.upper())
            if not isinstance(level, int):
                print(f"error: unknown log level {args.log_level!r}", file=stderr)
                return 2
            logging.getLogger().setLevel(level)
        try:
            settings = self.settings or get_settings()
            config = RunConfig.from_args(args, settings)
            with ExitStack() as stack:
                if config.cache_url:
                    factory = create_session_factory(config.cache_url)
                    session = stack.enter_context(get_session(factory))
                    self._repository = CharacterTableRepository(session)
                started = time.perf_counter()
                payload = args.handler(config)
                if config.timings:
                    payload["timings"] = {"seconds": round(time.perf_counter() - started, 3)}
        except GelfandScopeError as exc:
            logger.error("Команда %s завершилась ошибкой: %s", args.command, exc)
            print(f"error: {exc}", file=stderr)
            return exc.exit_code
        finally:
            self._repository = None
        print(render(payload, config.fmt), file=stdout)
        return 0

    # Helpers

    def _group(self, config: RunConfig) -> Group:
        if not config.group:
            raise UsageError("--group is required")
        return parse_group_input(config.group, cap=config.caps.closure)

    def _pair(self, config: RunConfig) -> tuple[Group, SubgroupEmbedding]:
        group = self._group(config)
        generators = parse_subgroup_generators(group, config.subgroup_gens)
        return group, subgroup_embed(group, generators, cap=config.caps.closure, label="H")

    def _tables(self, config: RunConfig, group: Group, embedding: SubgroupEmbedding):
        return gelfand.tables_for_pair(
            group, embedding, caps=config.caps, prime=config.prime, repository=self._repository
        )

    def _suzuki(self, config: RunConfig, m: int) -> suzuki.SuzukiGroup:
        return suzuki.suzuki_group(m, cap=config.caps.closure)

    # Handlers

    def suzuki_build(self, config: RunConfig) -> dict:
        sz = self._suzuki(config, config.options["m"])
        certificate = dict(sz.certificate)
        if config.options.get("perm"):
            group = sz.permutations
            pair_orbit = sz.ovoid.pair_orbit_size()
            q = sz.params.q
            certificate["ovoid"] = {
                "degree": sz.ovoid.degree,
                "faithful": group.order == sz.matrices.order,
                "pair_orbit": pair_orbit,
                "two_transitive": pair_orbit == (q * q + 1) * q * q,
            }
        else:
            group = sz.matrices
        return {**dump_group(group), "certificate": certificate}

    def suzuki_subgroup(self, config: RunConfig) -> dict:
        sz = self._suzuki(config, config.options["m"])
        which = config.options["which"]
        form = "matrix" if config.options.get("matrix") else "perm"
        embedding = suzuki.maximal_subgroup(sz, which, form=form, cap=config.caps.closure)
        expected = suzuki.maximal_subgroup_orders(sz.params.q)[which]
        return {
            **dump_group(embedding.sub),
            "certificate": suzuki.subgroup_certificate(embedding, expected),
        }

    def table(self, config: RunConfig) -> dict:
        group = self._group(config)
        result = character_table(group, prime=config.prime, caps=config.caps, repository=self._repository)
        payload = result.to_json()
        payload["total_degree"] = result.total_degree()
        payload["real_rows"] = result.real_rows()
        return payload

    def classes(self, config: RunConfig) -> dict:
        group = self._group(config)
        classes = group.classes
        rows = [
            {
                "index": k,
                "size": classes.sizes[k],
                "element_order": classes.element_orders[k],
                "real": classes.is_real(k),
                "representative": group.kind.to_json(group.elements[rep]),
            }
            for k, rep in enumerate(classes.reps)
        ]
        return {"order": group.order, "class_count": classes.count, "classes": rows}

    def sgp_check(self, config: RunConfig) -> dict:
        group, embedding = self._pair(config)
        tG, tH = self._tables(config, group, embedding)
        report = gelfand.is_strong_gelfand(tG, embedding, tH, force_full=config.options.get("force_full", False))
        return {"group_order": group.order, "subgroup_order": embedding.order, "prime": tG.p, **report.to_json()}

    def sgp_scan(self, config: RunConfig) -> dict:
        m = config.options.get("suzuki_m")
        if m is not None and m > 1:
            sz = self._suzuki(config, m)
            return gelfand.maximal_scan(sz, caps=config.caps, prime=config.prime, repository=self._repository).to_json()
        group = self._suzuki(config, 1).permutations if m is not None else self._group(config)
        return gelfand.sgp_scan(group, caps=config.caps, prime=config.prime, repository=self._repository).to_json()

    def gelfand_check(self, config: RunConfig) -> dict:
        group, embedding = self._pair(config)
        tG, tH = self._tables(config, group, embedding)
        report = gelfand.is_gelfand(tG, embedding, tH)
        payload = {"group_order": group.order, "subgroup_order": embedding.order, "prime": tG.p, **report.to_json()}
        if group.order <= config.caps.double_coset:
            payload["double_cosets"] = gelfand.double_coset_count(
                group, embedding.sub.generators, cap=config.caps.double_coset, trivial_column=report.trivial_column
            )
        return payload

    def oracle(self, config: RunConfig) -> dict:
        group, embedding = self._pair(config)
        generators = embedding.sub.generators
        payload: dict[str, Any] = {"group_order": group.order, "subgroup_order": embedding.order}
        if config.subcommand == "schur":
            payload["commutative"] = gelfand.schur_ring_commutes(group, generators, cap=config.caps.oracle)
        elif config.subcommand == "hecke":
            payload["commutative"] = gelfand.hecke_commutes(group, generators, cap=config.caps.oracle)
        else:
            payload["double_cosets"] = gelfand.double_coset_count(group, generators, cap=config.caps.double_coset)
        return payload

    def formula_sz_total(self, config: RunConfig) -> dict:
        q0 = config.options["q0"]
        payload: dict[str, Any] = {"q0": q0, "total_degree": suzuki.sz_total_degree_formula(q0)}
        r = config.options.get("r")
        if r is not None:
            payload["r"] = r
            payload["q"] = q0 ** r
            payload["bound_holds"] = suzuki.sz_total_degree_bound_holds(q0, r)
        return payload

    def corpus_list(self, config: RunConfig) -> dict:
        return {"groups": corpus_summary(cap=config.caps.closure)}


def build_app(settings: Settings | None = None, **streams: Optional[TextIO]) -> CliApp:
    app = CliApp(settings, **streams)
    app.setup_commands()
    return app


def run(argv: Optional[Sequence[str]] = None) -> int:
    return build_app().run(argv)

