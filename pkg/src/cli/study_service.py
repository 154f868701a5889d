"""Service layer running a study off the main thread, separating it from console output."""

import logging
import queue
import threading
from collections.abc import Iterator
from typing import Optional

from kmjack.experiments import StudyConfig, StudyResult, run_studies
from kmjack.messaging import MessageReceiver, StudyMessage

logger = logging.getLogger(__name__)


class StudyService:
    """Runs every distribution of a study on a worker thread and relays its messages."""

    def __init__(self, config: StudyConfig, threads: int = 1):
        self.config = config
        self.threads = threads
        self.results: list[StudyResult] = []
        self._error: Optional[BaseException] = None

    def run(self) -> Iterator[StudyMessage]:
        """Start the study and yield progress messages until it finishes.

        Raises:
            Exception: Whatever the study raised, re-raised on the calling thread.
        """
        receiver = MessageReceiver()

        def work() -> None:
            try:
                self.results = run_studies(self.config, receiver=receiver, threads=self.threads)
            except BaseException as e:
                logger.error(f"Study failed: {e}")
                self._error = e

        worker = threading.Thread(target=work, name="kmjack-study", daemon=True)
        worker.start()

        while True:
            try:
                # Block briefly for a message; timeout avoids deadlock at end
                yield receiver.get_message(timeout=0.2)
            except queue.Empty:
                if not worker.is_alive() and receiver.empty():
                    break

        worker.join()
        if self._error is not None:
            raise self._error
