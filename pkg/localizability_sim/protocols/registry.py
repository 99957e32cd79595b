"""
Name-to-class lookup for the protocol state machines.
"""

from typing import Dict, List, Type

from ..exceptions import UnknownProtocolError
from .base import ProtocolNode
from .ite import ITENode
from .te import TENode
from .tp import TPNode
from .we import WENode

PROTOCOLS: Dict[str, Type[ProtocolNode]] = {
    cls.name: cls for cls in (TENode, ITENode, TPNode, WENode)
}


def protocol_names() -> List[str]:
    return list(PROTOCOLS)


def get_protocol(name: str) -> Type[ProtocolNode]:
    try:
        return PROTOCOLS[name.lower()]
    except KeyError:
        raise UnknownProtocolError(
            f"Unknown protocol '{name}'; expected one of {', '.join(PROTOCOLS)}."
        ) from None
