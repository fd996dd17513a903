"""Token-heuristic user-agent parsing.

Extracts browser name/version and OS from the product tokens and the first
parenthesized platform segment, plus the phone model on mobile. This is not
a full UA database: the pipeline only needs browser/OS identity and whether
a device model is exposed.
"""

from __future__ import annotations

import re

from .types import UNKNOWN, BrowserProfile, PlatformClass, ValidationError

_PAREN_RE = re.compile(r"\(([^)]*)\)")
_VERSION_RE = re.compile(r"(\d+(?:[.\d]*\d)?)")

_WINDOWS_NT_RE = re.compile(r"^Windows NT ([\d.]+)")
_WINDOWS_PHONE_RE = re.compile(r"^Windows Phone(?: OS)? ([\d.]+)")
_ANDROID_RE = re.compile(r"^Android ([\d.]+)")
_MAC_RE = re.compile(r"^(?:Intel |PPC )?Mac OS X ([\d._]+)")
_IOS_RE = re.compile(r"^CPU (?:iPhone )?OS ([\d._]+) like Mac OS X")

# Platform-segment tokens that are never a device model: device-class words,
# architecture flags, locales, engine revisions.
_NON_MODEL_TOKENS = {
    "compatible",
    "linux",
    "u",
    "i",
    "n",
    "wv",
    "mobile",
    "tablet",
    "touch",
    "arm",
    "arm64",
    "aarch64",
    "x86",
    "x86_64",
    "x64",
    "win64",
    "wow64",
    "macintosh",
    "iphone",
    "ipad",
    "ipod",
    "khtml, like gecko",
    "like gecko",
}
_LOCALE_RE = re.compile(r"^[a-z]{2,3}(?:[-_][A-Za-z]{2,4})?$")


def _product_version(ua: str, token: str) -> str:
    m = re.search(re.escape(token) + r"[/ ]([\w.]+)", ua)
    if not m:
        return UNKNOWN
    vm = _VERSION_RE.match(m.group(1))
    return vm.group(1) if vm else UNKNOWN


def _detect_browser(ua: str) -> tuple[str, str]:
    if "Opera Mini/" in ua:
        return "Opera Mini", _product_version(ua, "Opera Mini")
    if "OPR/" in ua:
        return "Opera", _product_version(ua, "OPR")
    if "Opera/" in ua or ua.startswith("Opera"):
        version = _product_version(ua, "Version") if "Version/" in ua else _product_version(ua, "Opera")
        return "Opera", version
    for token in ("EdgiOS", "EdgA", "Edge", "Edg"):
        if f"{token}/" in ua:
            return "Edge", _product_version(ua, token)
    if "MSIE " in ua:
        return "Internet Explorer", _product_version(ua, "MSIE")
    if "Trident/" in ua:
        rv = re.search(r"rv:([\d.]+)", ua)
        return "Internet Explorer", rv.group(1) if rv else UNKNOWN
    if "Firefox/" in ua:
        return "Firefox", _product_version(ua, "Firefox")
    if "FxiOS/" in ua:
        return "Firefox", _product_version(ua, "FxiOS")
    if "CriOS/" in ua:
        return "Chrome", _product_version(ua, "CriOS")
    if "Chrome/" in ua:
        return "Chrome", _product_version(ua, "Chrome")
    if "Safari/" in ua:
        version = _product_version(ua, "Version") if "Version/" in ua else UNKNOWN
        return "Safari", version
    return UNKNOWN, UNKNOWN


def _detect_os(tokens: list[str]) -> tuple[str, str, set[str]]:
    """Return (os_name, os_version, tokens consumed as OS/irrelevant)."""
    consumed: set[str] = set()
    os_name, os_version = UNKNOWN, UNKNOWN
    for token in tokens:
        for pattern, name in (
            (_WINDOWS_PHONE_RE, "Windows Phone"),
            (_WINDOWS_NT_RE, "Windows NT"),
            (_IOS_RE, "iOS"),
            (_MAC_RE, "Mac OS X"),
            (_ANDROID_RE, "Android"),
        ):
            m = pattern.match(token)
            if m:
                consumed.add(token)
                if os_name == UNKNOWN:
                    os_name = name
                    os_version = m.group(1).replace("_", ".")
                break
    if os_name == UNKNOWN and "Linux" in tokens:
        os_name = "Linux"
    return os_name, os_version, consumed


def _phone_model(tokens: list[str], consumed: set[str]) -> str | None:
    candidates = []
    for token in tokens:
        if token in consumed:
            continue
        lowered = token.lower()
        if lowered in _NON_MODEL_TOKENS or _LOCALE_RE.match(token):
            continue
        if lowered.startswith(("rv:", "trident/", "build/", "windows", "android", "cpu ")):
            continue
        # "<model> Build/<firmware>" collapses to the model part.
        token = token.split(" Build/")[0].strip()
        if token:
            candidates.append(token)
    # Manufacturer usually precedes the model (e.g. "Microsoft; Lumia 650");
    # the last candidate is the most specific.
    return candidates[-1] if candidates else None


def parse_user_agent(ua: str, platform: PlatformClass) -> BrowserProfile:
    """Best-effort profile extraction; unknown parts come back as "unknown"."""
    if not ua:
        raise ValidationError("empty user agent", field="user_agent")
    browser_name, browser_version = _detect_browser(ua)
    paren = _PAREN_RE.search(ua)
    tokens = [t.strip() for t in paren.group(1).split(";") if t.strip()] if paren else []
    os_name, os_version, consumed = _detect_os(tokens)
    phone_model = None
    if platform is PlatformClass.MOBILE:
        phone_model = _phone_model(tokens, consumed)
    return BrowserProfile(
        browser_name=browser_name,
        browser_version=browser_version,
        os_name=os_name,
        os_version=os_version,
        phone_model=phone_model,
    )
