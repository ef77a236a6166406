# Generated by Django 4.1.3 on 2026-10-18 12:00

from django.db import migrations, models
import django.utils.timezone
import model_utils.fields
import rules.contrib.models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="CacheEntry",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "created",
                    model_utils.fields.AutoCreatedField(
                        default=django.utils.timezone.now,
                        editable=False,
                        verbose_name="created",
                    ),
                ),
                (
                    "modified",
                    model_utils.fields.AutoLastModifiedField(
                        default=django.utils.timezone.now,
                        editable=False,
                        verbose_name="modified",
                    ),
                ),
                (
                    "key",
                    models.CharField(
                        help_text="Content key of the computation.",
                        max_length=64,
                        unique=True,
                    ),
                ),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("report", "Cohomology report"),
                            ("table", "Euler characteristic table"),
                        ],
                        help_text="Computation kind.",
                        max_length=16,
                    ),
                ),
                (
                    "code_version",
                    models.CharField(
                        db_index=True,
                        help_text="Code version the entry was computed with.",
                        max_length=32,
                    ),
                ),
                (
                    "params",
                    models.TextField(help_text="Canonical JSON of the parameters."),
                ),
                (
                    "payload",
                    models.TextField(help_text="Canonical JSON of the result."),
                ),
                (
                    "digest",
                    models.CharField(help_text="sha256 of the payload.", max_length=64),
                ),
            ],
            options={
                "abstract": False,
            },
            bases=(rules.contrib.models.RulesModelMixin, models.Model),
        ),
    ]
