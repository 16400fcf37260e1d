"""Epoch progress bars built on rich."""

from typing import Optional

from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

from ..processing.trainer import ProgressCallback


class TrainingProgress:
    """
    Context manager yielding one progress task per training stage.

    Use `stage(label, total)` as the pipeline's stage-progress factory.
    Disabled instances hand out callbacks that do nothing.
    """

    def __init__(self, enabled: bool = True) -> None:
        self.enabled = enabled
        self._progress: Optional[Progress] = None

    def __enter__(self) -> "TrainingProgress":
        if self.enabled:
            self._progress = Progress(
                TextColumn("{task.description}"),
                BarColumn(),
                TextColumn("{task.completed}/{task.total}"),
                TextColumn("val RMSE {task.fields[val_rmse]}"),
                TimeElapsedColumn(),
            )
            self._progress.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        if self._progress is not None:
            self._progress.stop()
            self._progress = None
        return False

    def stage(self, label: str, total: int) -> ProgressCallback:
        if self._progress is None:
            return lambda epoch, loss, val_rmse: None
        progress = self._progress
        task_id = progress.add_task(label, total=total, val_rmse="-")

        def advance(epoch: int, loss: float, val_rmse: float) -> None:
            progress.update(task_id, completed=epoch + 1, val_rmse=f"{val_rmse:.4f}")

        return advance
