"""
Trace events.

Library code reports what it is doing by calling ``trace_event()``.
Nothing happens unless the event has been switched on with
``trace_activate()``; then the installed hook gets the event and its
fields. The default hook prints one highlighted line per event through
the active output interface.
"""

from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from rfcombiner.lib import output
from rfcombiner.lib.format import format_fields, pygments_format

TraceEventNames = (
    "design",  # a combiner was built
    "iteration",  # one cycle of the alternating PSOAC design
    "solve_fallback",  # Cholesky failed; LDL* or jitter was used
    "trial_error",  # a Monte-Carlo trial was excluded
    "point",  # a curve point was aggregated
    "cross_check",  # empirical MSE disagrees with the analytic value
)
TraceEvent = Enum("TraceEvent", TraceEventNames)

# Event filtering masks. An empty list means no filtering; otherwise
# only events whose "method" field is in the list get through.
event_filters: Dict[str, List[str]] = {name: [] for name in TraceEventNames}

# Events currently switched on.
active_events: set = set()

hook_fn: Optional[Callable[[TraceEvent, Dict[str, Any]], None]] = None

# None means unstyled output.
trace_style: Optional[str] = None


def event_from_name(name: str) -> TraceEvent:
    """Accept ``solve-fallback`` as well as ``solve_fallback``."""
    key = name.strip().replace("-", "_")
    try:
        return TraceEvent[key]
    except KeyError:
        raise ValueError(
            f"unknown trace event {name!r}; expected one of "
            + ", ".join(n.replace("_", "-") for n in TraceEventNames)
        )


def trace_event_print(event: TraceEvent, fields: Dict[str, Any]):
    """Default hook: one line per event."""
    line = format_fields(event.name.replace("_", "-"), fields)
    if event in (TraceEvent.trial_error, TraceEvent.cross_check):
        output.errmsg(line)
    else:
        output.msg(pygments_format(line, trace_style))


def trace_activate(
    hook: Optional[Callable] = trace_event_print,
    style: Optional[str] = None,
    **events,
):
    """Switch events on or off, e.g. ``trace_activate(iteration=True)``.

    The value for an event may also be a list of method names, which
    then acts as a filter: ``trace_activate(iteration=["psoac"])``.
    """
    global hook_fn, trace_style
    for name, option in events.items():
        event = event_from_name(name)
        if option is False or option is None:
            active_events.discard(event)
            event_filters[event.name] = []
            continue
        active_events.add(event)
        if isinstance(option, (list, tuple)):
            event_filters[event.name] = list(option)
        elif isinstance(option, str):
            event_filters[event.name] = [option]
        else:
            event_filters[event.name] = []
    hook_fn = hook if active_events else None
    trace_style = style


def trace_deactivate():
    global hook_fn
    active_events.clear()
    for name in event_filters:
        event_filters[name] = []
    hook_fn = None


def is_traced(event: TraceEvent) -> bool:
    return hook_fn is not None and event in active_events


def trace_event(event: TraceEvent, **fields):
    """Report ``event``; a no-op unless the event is active."""
    if hook_fn is None or event not in active_events:
        return
    filters = event_filters.get(event.name)
    if filters and fields.get("method") not in filters:
        return
    hook_fn(event, fields)
