"""Total classification of textual IP addresses into scope classes."""

from __future__ import annotations

import ipaddress
from enum import Enum

from .types import ValidationError


class IpClass(Enum):
    PRIVATE_V4 = "private_v4"
    PUBLIC_V4 = "public_v4"
    LOOPBACK_V4 = "loopback_v4"
    LINK_LOCAL_V4 = "link_local_v4"
    ULA = "ula"
    LINK_LOCAL_V6 = "link_local_v6"
    LOOPBACK_V6 = "loopback_v6"
    PUBLIC_V6 = "public_v6"


_PRIVATE_V4_NETS = (
    ipaddress.ip_network("10.0.0.0/8"),
    ipaddress.ip_network("172.16.0.0/12"),
    ipaddress.ip_network("192.168.0.0/16"),
)
_LOOPBACK_V4 = ipaddress.ip_network("127.0.0.0/8")
_LINK_LOCAL_V4 = ipaddress.ip_network("169.254.0.0/16")
_ULA = ipaddress.ip_network("fc00::/7")
_LINK_LOCAL_V6 = ipaddress.ip_network("fe80::/10")


def classify_ip(address: str) -> IpClass:
    """Map an address to exactly one class; unparseable text raises."""
    try:
        ip = ipaddress.ip_address(address)
    except ValueError:
        raise ValidationError(f"{address!r} is not an IP address", field="address") from None
    if ip.version == 4:
        if ip in _LOOPBACK_V4:
            return IpClass.LOOPBACK_V4
        if ip in _LINK_LOCAL_V4:
            return IpClass.LINK_LOCAL_V4
        if any(ip in net for net in _PRIVATE_V4_NETS):
            return IpClass.PRIVATE_V4
        return IpClass.PUBLIC_V4
    if ip == ipaddress.ip_address("::1"):
        return IpClass.LOOPBACK_V6
    if ip in _LINK_LOCAL_V6:
        return IpClass.LINK_LOCAL_V6
    if ip in _ULA:
        return IpClass.ULA
    return IpClass.PUBLIC_V6
