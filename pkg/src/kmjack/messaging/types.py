"""Message type definitions for study progress reporting."""

import json
import time
import uuid
from abc import ABC
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, ClassVar, Dict, Optional


class MessageType(Enum):
    """Enumeration of all message types."""

    STUDY_STARTED = "study_started"
    CELL_STARTED = "cell_started"
    CELL_FINISHED = "cell_finished"
    STUDY_FINISHED = "study_finished"


def new_message_id() -> str:
    """Generate a short unique message ID."""
    return str(uuid.uuid4())[:8]


@dataclass
class StudyMessage(ABC):
    """Base class for all study messages."""

    message_id: str
    timestamp: float
    message_type: ClassVar[MessageType]

    @classmethod
    def create(cls, **fields: Any) -> "StudyMessage":
        """Build a message stamped with a fresh ID and the current time."""
        return cls(message_id=new_message_id(), timestamp=time.time(), **fields)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize message to dictionary."""
        data = asdict(self)
        data["message_type"] = self.message_type.value
        return data

    def to_json(self) -> str:
        """Serialize message to JSON string."""
        return json.dumps(self.to_dict())


@dataclass
class StudyStartedMessage(StudyMessage):
    """A study run has begun."""

    study: str
    distribution: str
    cell_count: int = 0
    replications: int = 0
    threads: int = 1

    message_type: ClassVar[MessageType] = MessageType.STUDY_STARTED


@dataclass
class CellStartedMessage(StudyMessage):
    """Replications for one (n, p) cell are about to be drawn."""

    cell_index: int
    n: int
    p_percent: int
    censoring_parameter: Optional[float] = None

    message_type: ClassVar[MessageType] = MessageType.CELL_STARTED


@dataclass
class CellFinishedMessage(StudyMessage):
    """All replications of one cell have been reduced."""

    cell_index: int
    n: int
    p_percent: int
    censoring_fraction: float = 0.0
    elapsed_s: float = 0.0
    mean_bias: Optional[Dict[str, float]] = None

    message_type: ClassVar[MessageType] = MessageType.CELL_FINISHED


@dataclass
class StudyFinishedMessage(StudyMessage):
    """The study grid is complete."""

    distribution: str
    cell_count: int = 0
    elapsed_s: float = 0.0

    message_type: ClassVar[MessageType] = MessageType.STUDY_FINISHED
