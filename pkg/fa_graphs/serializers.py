"""
Validation of job descriptions. A job file is JSON with the same keys as the
command-line flags; both paths go through :class:`JobSpecSerializer`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from .exceptions import InvalidSpec
from .famod import FAModuleSpec
from .graphs.enumerate import VARIANTS
from .symcore import Partition

COMMANDS = ("cohomology", "euler", "table", "hodge", "check")
FORMATS = ("json", "csv", "table")
SUITES = ("core", "full")
SHEETS = ("all", "first", "second", "total")


@dataclass
class JobSpec:
    """
    A fully determined run.

    Attributes:
        command (str): One of ``COMMANDS``.
        module (FAModuleSpec | None): The decoration, when the command takes one.
        g (list[int]): Genera to run.
        n (list[int]): Arities to run.
        degree (int | None): Restrict output to one cohomological degree.
        variant (str): ``"full"`` or ``"star"``.
        hat (bool): Use the complex with positive-genus vertices.
        weight (int | None): Hodge weight for ``euler`` and ``hodge``.
        assume_conjecture (bool): Accept results that depend on the genus-three hypothesis.
        g_max (int): Table range.
        n_max (int): Table range.
        format (str): Output format.
        budgets (dict[str, int]): Overrides of ``MAX_*`` and ``WALL_CLOCK_SECONDS``.
        workers (int | None): Worker pool size.
        output (str | None): Where to write, stdout if unset.
        w0_data (str | None): Path of a weight-zero dataset.
        suite (str): Which checks ``selfcheck`` runs.
        sheet (str): Which part of a weight table to render.
        use_cache (bool): Read and write the persistent cache.
        cache_dir (str | None): Cache directory for this run, overriding ``CACHE_DIR``.
    """

    command: str
    module: Optional[FAModuleSpec] = None
    g: list = field(default_factory=list)
    n: list = field(default_factory=list)
    degree: Optional[int] = None
    variant: str = "full"
    hat: bool = False
    weight: Optional[int] = None
    assume_conjecture: bool = False
    g_max: int = 0
    n_max: int = 0
    format: str = "json"
    budgets: dict = field(default_factory=dict)
    workers: Optional[int] = None
    output: Optional[str] = None
    w0_data: Optional[str] = None
    suite: str = "core"
    sheet: str = "all"
    use_cache: bool = False
    cache_dir: Optional[str] = None

    def as_json(self) -> dict[str, Any]:
        payload = asdict(self)
        payload["module"] = self.module.as_json() if self.module else None
        return payload


class RangeField(serializers.Field):
    """
    A list of nonnegative integers given as ``5``, ``"5"``, ``"2-6"``, ``"1,3,4"`` or a list.
    """

    default_error_messages = {
        "invalid": _("Expected an integer, a range like 2-6, or a list."),
        "negative": _("Values must be nonnegative."),
        "empty": _("The range is empty."),
    }

    def to_internal_value(self, data):
        try:
            if isinstance(data, int):
                values = [data]
            elif isinstance(data, (list, tuple)):
                values = [int(x) for x in data]
            else:
                values = []
                for chunk in str(data).split(","):
                    chunk = chunk.strip()
                    if "-" in chunk[1:]:
                        lo, hi = chunk.split("-", 1)
                        values.extend(range(int(lo), int(hi) + 1))
                    elif chunk:
                        values.append(int(chunk))
        except (TypeError, ValueError):
            self.fail("invalid")
        if not values:
            self.fail("empty")
        if any(v < 0 for v in values):
            self.fail("negative")
        return sorted(set(values))

    def to_representation(self, value):
        return list(value)


class BudgetSerializer(serializers.Serializer):
    max_generators = serializers.IntegerField(min_value=1, required=False)
    max_matrix_entries = serializers.IntegerField(min_value=1, required=False)
    wall_clock_seconds = serializers.IntegerField(min_value=1, required=False)
    primes = serializers.IntegerField(min_value=1, required=False)


class JobSpecSerializer(serializers.Serializer):
    """
    Validates a job payload into a :class:`JobSpec`.

    ``lambda``, ``tilde`` and ``product`` are mutually exclusive; ``cohomology``
    needs exactly one of them plus ``g`` and ``n``.
    """

    command = serializers.ChoiceField(choices=COMMANDS)
    partition = serializers.CharField(required=False, allow_blank=True)
    tilde = serializers.IntegerField(required=False, min_value=1)
    product = serializers.CharField(required=False)
    g = RangeField(required=False)
    n = RangeField(required=False)
    degree = serializers.IntegerField(required=False, allow_null=True, min_value=0)
    variant = serializers.ChoiceField(choices=VARIANTS, default="full")
    hat = serializers.BooleanField(default=False)
    weight = serializers.ChoiceField(choices=(17, 19), required=False, allow_null=True)
    assume_conjecture = serializers.BooleanField(default=False)
    gmax = serializers.IntegerField(required=False, min_value=0, default=0)
    nmax = serializers.IntegerField(required=False, min_value=0, default=0)
    format = serializers.ChoiceField(choices=FORMATS, default="json")
    budget = BudgetSerializer(required=False)
    workers = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    output = serializers.CharField(required=False, allow_null=True)
    w0_data = serializers.CharField(required=False, allow_null=True)
    suite = serializers.ChoiceField(choices=SUITES, default="core")
    sheet = serializers.ChoiceField(choices=SHEETS, default="all")
    use_cache = serializers.BooleanField(default=False)
    cache_dir = serializers.CharField(required=False, allow_null=True)

    def to_internal_value(self, data):
        # job files and flags say "lambda", which cannot be a field name
        data = dict(data)
        if "lambda" in data:
            data["partition"] = data.pop("lambda")
        return super().to_internal_value(data)

    def _module(self, attrs) -> Optional[FAModuleSpec]:
        given = [key for key in ("partition", "tilde", "product") if attrs.get(key) not in (None, "")]
        if len(given) > 1:
            raise serializers.ValidationError(_("Give only one of lambda, tilde and product."))
        if not given:
            return None
        try:
            if given[0] == "partition":
                return FAModuleSpec.c(Partition.parse(attrs["partition"]))
            if given[0] == "tilde":
                return FAModuleSpec.tilde(attrs["tilde"])
            return FAModuleSpec.product(*(int(a) for a in str(attrs["product"]).split(",")))
        except (ValueError, InvalidSpec) as err:
            raise serializers.ValidationError(str(err)) from err

    def validate(self, attrs):
        module = self._module(attrs)
        command = attrs["command"]
        if command in ("cohomology", "table"):
            if module is None:
                raise serializers.ValidationError(_("This command needs --lambda, --tilde or --product."))
            if "g" not in attrs or "n" not in attrs:
                raise serializers.ValidationError(_("This command needs --g and --n."))
        if command == "hodge":
            if attrs.get("weight") is None:
                raise serializers.ValidationError(_("hodge needs --weight."))
            if "g" not in attrs or "n" not in attrs:
                raise serializers.ValidationError(_("hodge needs --g and --n."))
        if command == "euler" and module is None and attrs.get("weight") is None:
            raise serializers.ValidationError(_("euler needs --weight or a module."))
        if attrs.get("weight") == 19 and not attrs.get("assume_conjecture"):
            raise serializers.ValidationError(_("Weight 19 results are conditional; pass --assume-conjecture."))
        if attrs.get("variant") == "star" and (attrs.get("hat") or (module is not None and module.kind == "Tilde")):
            raise serializers.ValidationError(_("The star variant only exists for G of C(lambda) and products."))
        attrs["module"] = module
        return attrs

    def to_job(self) -> JobSpec:
        data = self.validated_data
        return JobSpec(
            command=data["command"],
            module=data["module"],
            g=data.get("g", []),
            n=data.get("n", []),
            degree=data.get("degree"),
            variant=data["variant"],
            hat=data["hat"],
            weight=data.get("weight"),
            assume_conjecture=data["assume_conjecture"],
            g_max=data["gmax"],
            n_max=data["nmax"],
            format=data["format"],
            budgets=dict(data.get("budget", {})),
            workers=data.get("workers"),
            output=data.get("output"),
            w0_data=data.get("w0_data"),
            suite=data["suite"],
            sheet=data["sheet"],
            use_cache=data["use_cache"],
            cache_dir=data.get("cache_dir"),
        )
