"""Device-aware payload shaping and context-event capture.

A ranked recommendation list is cut down to what one concrete device can
display: at most max_list_items entries, no image flags on devices without
image support, and a serialized size within max_payload_bytes. Size is
enforced by walking a degradation ladder (full -> compact -> text_only)
and, as a last resort, dropping trailing items. Order is always preserved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .diffusion import Recommendation
from .profiles import ContextEvent, DeviceProfile

#: Compact variant cuts content to this many characters.
COMPACT_EXCERPT_CHARS = 120
#: Text-only variant keeps titles only, cut to this many characters.
TEXT_ONLY_TITLE_CHARS = 48


class Variant(str, Enum):
    FULL = "full"
    COMPACT = "compact"
    TEXT_ONLY = "text_only"


@dataclass(frozen=True)
class PayloadItem:
    rec_id: str
    title: str
    content_excerpt: str
    image_included: bool


@dataclass(frozen=True)
class AdaptedPayload:
    items: tuple[PayloadItem, ...]
    variant: Variant
    device_id: str

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": "adapted_payload",
            "device_id": self.device_id,
            "variant": self.variant.value,
            "items": [
                {
                    "rec_id": i.rec_id,
                    "title": i.title,
                    "content_excerpt": i.content_excerpt,
                    "image_included": i.image_included,
                }
                for i in self.items
            ],
        }

    def serialized(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True, separators=(",", ":"))

    def size_bytes(self) -> int:
        return len(self.serialized().encode("utf-8"))


def items_from_recommendations(
    recs: Iterable[Recommendation],
    images: Mapping[str, bool] | bool = True,
) -> list[PayloadItem]:
    """Full-fidelity items for a recommendation list.

    images says whether an image accompanies each recommendation (a single
    flag or a per-rec-id map); adaptation can only strip images, never add
    them.
    """
    out = []
    for rec in recs:
        has_image = images if isinstance(images, bool) else images.get(rec.rec_id, False)
        out.append(
            PayloadItem(
                rec_id=rec.rec_id,
                title=rec.title,
                content_excerpt=rec.content,
                image_included=bool(has_image),
            )
        )
    return out


def _shape(item: PayloadItem, variant: Variant, device: DeviceProfile,
           excerpt_chars: int, title_chars: int) -> PayloadItem:
    image = item.image_included and device.image_support and variant is not Variant.TEXT_ONLY
    if variant is Variant.FULL:
        return PayloadItem(item.rec_id, item.title, item.content_excerpt, image)
    if variant is Variant.COMPACT:
        return PayloadItem(item.rec_id, item.title, item.content_excerpt[:excerpt_chars], image)
    return PayloadItem(item.rec_id, item.title[:title_chars], "", image)


def adapt_items(
    items: Sequence[PayloadItem],
    device: DeviceProfile,
    excerpt_chars: int = COMPACT_EXCERPT_CHARS,
    title_chars: int = TEXT_ONLY_TITLE_CHARS,
) -> AdaptedPayload:
    """Shape already-built items for one device.

    Idempotent: re-adapting a payload's items for the same device leaves
    them unchanged (truncation is stable and images are never re-added).
    """
    kept = list(items[: device.max_list_items])
    candidate = AdaptedPayload((), Variant.FULL, device.device_id)
    for variant in (Variant.FULL, Variant.COMPACT, Variant.TEXT_ONLY):
        shaped = tuple(
            _shape(i, variant, device, excerpt_chars, title_chars) for i in kept
        )
        candidate = AdaptedPayload(shaped, variant, device.device_id)
        if candidate.size_bytes() <= device.max_payload_bytes:
            return candidate
    # Text-only still too large: drop trailing items until the cap holds.
    shaped_items = list(candidate.items)
    while shaped_items and candidate.size_bytes() > device.max_payload_bytes:
        shaped_items.pop()
        candidate = AdaptedPayload(tuple(shaped_items), Variant.TEXT_ONLY, device.device_id)
    return candidate


def adapt_payload(
    recs: Sequence[Recommendation],
    d: DeviceProfile,
    images: Mapping[str, bool] | bool = True,
    excerpt_chars: int = COMPACT_EXCERPT_CHARS,
    title_chars: int = TEXT_ONLY_TITLE_CHARS,
) -> AdaptedPayload:
    """Turn a ranked recommendation list into what the device can display.

    recs must already be in presentation order; the output item sequence
    is a prefix of it. An empty payload is legal.
    """
    return adapt_items(items_from_recommendations(recs, images), d, excerpt_chars, title_chars)


def record_event(store, e: ContextEvent) -> None:
    """Append one context event to the store's per-user stream.

    The user must exist; social-profile counters update as part of the
    append. Equal timestamps are kept in arrival order.
    """
    store.record_event(e)
