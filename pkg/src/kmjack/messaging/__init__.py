"""Progress messages posted by study runs and the queue that carries them."""

from .receiver import MessageReceiver
from .types import (
    CellFinishedMessage,
    CellStartedMessage,
    MessageType,
    StudyFinishedMessage,
    StudyMessage,
    StudyStartedMessage,
)

__all__ = [
    # Base types
    "StudyMessage",
    "MessageType",
    # Message types
    "StudyStartedMessage",
    "CellStartedMessage",
    "CellFinishedMessage",
    "StudyFinishedMessage",
    # Core classes
    "MessageReceiver",
]
