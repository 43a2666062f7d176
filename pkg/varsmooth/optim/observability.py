"""Run tracing for solver executions."""

from contextlib import contextmanager
from typing import Any, Dict, Optional

from varsmooth.core.config import get_settings
from varsmooth.core.logger import get_logger

logger = get_logger(__name__)


class SolverObserver:
    """Logs solver run lifecycle and periodic iteration progress."""

    def __init__(self, log_every: Optional[int] = None):
        """Initialize the observer.

        Args:
            log_every: Iteration logging period; defaults to the configured value
        """
        self.settings = get_settings()
        self.log_every = log_every or self.settings.log_every

    @contextmanager
    def trace_run(self, run_name: str, metadata: Optional[Dict[str, Any]] = None):
        """Context manager for tracing a solver run.

        Args:
            run_name: Name of the run to trace
            metadata: Additional metadata to attach to the run

        Yields:
            None
        """
        logger.info("Starting solver run", run_name=run_name, metadata=metadata)

        try:
            yield
        except Exception as e:
            logger.error("Solver run failed", run_name=run_name, error=str(e))
            raise
        finally:
            logger.debug("Solver run finished", run_name=run_name)

    def log_iteration(
        self,
        run_name: str,
        n: int,
        mu: float,
        gamma: float,
        grad_norm: float,
        value: float,
        bt_count: int = 0,
    ) -> None:
        """Log every `log_every`-th iteration at debug level."""
        if n % self.log_every != 0:
            return
        logger.debug(
            "Iteration",
            run_name=run_name,
            n=n,
            mu=mu,
            gamma=gamma,
            grad_norm=grad_norm,
            value=value,
            bt_count=bt_count,
        )

    def log_completion(self, run_name: str, iterations: int, reason: str, elapsed: float, value: float) -> None:
        """Log the final state of a run."""
        logger.info(
            "Solver run completed",
            run_name=run_name,
            iterations=iterations,
            reason=reason,
            elapsed_s=round(elapsed, 4),
            value=value,
        )


# Global instance
_solver_observer: Optional[SolverObserver] = None


def get_solver_observer() -> SolverObserver:
    """Get or create the shared observer instance."""
    global _solver_observer
    if _solver_observer is None:
        _solver_observer = SolverObserver()
    return _solver_observer
