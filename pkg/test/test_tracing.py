import pytest

from rfcombiner import tracing
from rfcombiner.tracing import (
    TraceEvent,
    event_from_name,
    is_traced,
    trace_activate,
    trace_deactivate,
    trace_event,
)


def test_event_names():
    assert event_from_name("solve-fallback") is TraceEvent.solve_fallback
    assert event_from_name(" point ") is TraceEvent.point
    with pytest.raises(ValueError):
        event_from_name("breakpoint")


def test_inactive_events_are_dropped():
    seen = []
    trace_activate(hook=lambda event, fields: seen.append(event), point=True)
    trace_event(TraceEvent.design, method="cgac")
    trace_event(TraceEvent.point, method="cgac")
    assert seen == [TraceEvent.point]
    assert is_traced(TraceEvent.point)
    assert not is_traced(TraceEvent.design)


def test_method_filter():
    seen = []
    trace_activate(hook=lambda event, fields: seen.append(fields["method"]), iteration=["psoac"])
    trace_event(TraceEvent.iteration, method="magiq", iteration=1)
    trace_event(TraceEvent.iteration, method="psoac", iteration=1)
    assert seen == ["psoac"]


def test_switch_off():
    trace_activate(hook=lambda *args: None, design=True, point=True)
    trace_activate(hook=lambda *args: None, design=False)
    assert not is_traced(TraceEvent.design)
    assert is_traced(TraceEvent.point)
    trace_deactivate()
    assert tracing.hook_fn is None
    assert not tracing.active_events


def test_default_hook(capture):
    trace_activate(design=True, trial_error=True)
    trace_event(TraceEvent.design, method="cgac", n_rf=4, p_n=0.1)
    trace_event(TraceEvent.trial_error, method="cgac", trial=3, error="singular")
    assert capture.msgs == ["design: method=cgac n_rf=4 p_n=0.1"]
    assert capture.errmsgs == ["trial-error: method=cgac trial=3 error=singular"]
