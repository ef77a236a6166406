# Generated by Django 4.1.3 on 2026-10-18 12:00

from django.db import migrations, models


class Migration(migrations.Migration):

    dependencies = [
        ("fa_graphs", "0001_initial"),
    ]

    operations = [
        migrations.AddField(
            model_name="cacheentry",
            name="cache_dir",
            field=models.CharField(
                db_index=True,
                default="",
                help_text="Cache directory the entry belongs to.",
                max_length=255,
            ),
            preserve_default=False,
        ),
        migrations.AlterField(
            model_name="cacheentry",
            name="key",
            field=models.CharField(help_text="Content key of the computation.", max_length=64),
        ),
        migrations.AlterField(
            model_name="cacheentry",
            name="kind",
            field=models.CharField(
                choices=[
                    ("basis", "Graph basis"),
                    ("rank", "Matrix rank"),
                    ("report", "Cohomology report"),
                    ("table", "Euler characteristic table"),
                ],
                help_text="Computation kind.",
                max_length=16,
            ),
        ),
        migrations.AddConstraint(
            model_name="cacheentry",
            constraint=models.UniqueConstraint(fields=("cache_dir", "key"), name="fa_graphs_unique_key_per_dir"),
        ),
    ]
