"""Simple message receiver using queue.Queue internally."""

import queue
from typing import Optional

from .types import StudyMessage


class MessageReceiver:
    """Receives study messages posted from worker threads."""

    def __init__(self):
        self._queue: queue.Queue[StudyMessage] = queue.Queue()

    def receive_message(self, message: StudyMessage) -> None:
        """Receive a message for processing."""
        self._queue.put(message)

    def get_message(self, timeout: Optional[float] = None) -> StudyMessage:
        """Get a message from the queue. Blocks until available or timeout."""
        return self._queue.get(timeout=timeout)

    def get_message_nowait(self) -> StudyMessage:
        """Get a message without blocking. Raises queue.Empty if none available."""
        return self._queue.get_nowait()

    def drain(self) -> list[StudyMessage]:
        """Take every message currently queued."""
        messages = []
        while True:
            try:
                messages.append(self._queue.get_nowait())
            except queue.Empty:
                return messages

    def empty(self) -> bool:
        return self._queue.empty()

    def qsize(self) -> int:
        """Get approximate queue size."""
        return self._queue.qsize()
