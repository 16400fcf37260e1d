"""Console reports rendered with rich."""

from typing import Optional, Sequence, Tuple

from rich.console import Console
from rich.table import Table

from ..models.kan import ImportanceReport
from ..models.pipeline import RmseMetrics

# (model name, metrics, parameter count)
RmseRow = Tuple[str, RmseMetrics, int]


def rmse_table(rows: Sequence[RmseRow]) -> Table:
    table = Table(title="Test performance")
    table.add_column("Model")
    table.add_column("Params", justify="right")
    for split in ("Train RMSE", "Val RMSE", "Test RMSE"):
        table.add_column(split, justify="right")
    for name, metrics, params in rows:
        table.add_row(name, str(params), f"{metrics.train:.4f}", f"{metrics.val:.4f}", f"{metrics.test:.4f}")
    return table


def print_rmse_table(rows: Sequence[RmseRow], console: Optional[Console] = None) -> None:
    (console or Console()).print(rmse_table(rows))


def print_importance(report: ImportanceReport, k: int, console: Optional[Console] = None) -> None:
    """Ranked importance with the selected top-k marked."""
    table = Table(title=f"Stage-1 importance (top {k} selected)")
    table.add_column("Rank", justify="right")
    table.add_column("Feature")
    table.add_column("alpha", justify="right")
    table.add_column("Selected", justify="center")
    for entry in report.entries:
        table.add_row(str(entry.rank), entry.name, f"{entry.alpha:.4f}", "x" if entry.rank <= k else "")
    (console or Console()).print(table)
