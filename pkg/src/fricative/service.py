"""Live streaming service: interactive sessions over HTTP + WebSocket.

The server is authoritative for all DSP. Clients send raw displacement
counts only; per 8 ms update the server returns one JSON frame message
(telemetry plus the step's final friction command) and one binary audio
frame holding engine_rate/125 samples of post-delay audio.

Binary audio frame layout: tag byte 0x01, then an unsigned 32-bit
little-endian sample count, then that many float32 little-endian
samples.

Message handling per session is lockstep (receive, step, reply), so at
most one frame is in flight per session and a stalled client simply
pauses its own pipeline; no motion is ever fabricated. Sessions share
nothing but immutable signal buffers.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Request, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, ValidationError

from . import __version__
from .harness import pilot_signal, table1_row
from .mapping import PRESETS, SpatialMapping
from .motion import UPDATE_RATE_HZ, DisplacementUpdate
from .pipeline import RenderPipeline
from .signal import SignalBuffer, signal_from_bytes

AUDIO_FRAME_TAG = 0x01

# Outbound frames a session may hold before the sender blocks; the
# lockstep loop keeps the real depth at 1.
MAX_QUEUED_FRAMES = 16


class SessionConfigMsg(BaseModel):
    type: Literal["config"]
    preset: Optional[int] = None
    samples_per_mm: Optional[float] = None
    friction_enabled: bool = True
    engine_rate: int = 48000
    signal: str = "pilot"


class MoveMsg(BaseModel):
    type: Literal["move"]
    seq: int
    dx_counts: int
    dy_counts: int = 0


class FrameMsg(BaseModel):
    type: Literal["frame"] = "frame"
    seq: int
    t_s: float
    position_mm: float
    speed_mm_s: float
    friction_N: float


class ReadyMsg(BaseModel):
    type: Literal["ready"] = "ready"
    engine_rate: int
    samples_per_update: int
    samples_per_mm: float
    fragment_width_mm: float
    friction_enabled: bool
    signal_length: int


class ErrorMsg(BaseModel):
    type: Literal["error"] = "error"
    reason: str
    detail: str = ""
    fatal: bool = False


class PresetInfo(BaseModel):
    id: int
    samples_per_mm: float
    cycle_width_mm: float
    fragment_width_mm: float


class SignalUploadResponse(BaseModel):
    signal_id: str
    length: int


def encode_audio_frame(samples: np.ndarray) -> bytes:
    data = np.asarray(samples, dtype="<f4")
    return struct.pack("<BI", AUDIO_FRAME_TAG, len(data)) + data.tobytes()


def decode_audio_frame(payload: bytes) -> np.ndarray:
    if len(payload) < 5 or payload[0] != AUDIO_FRAME_TAG:
        raise ValueError("not an audio frame")
    (count,) = struct.unpack_from("<I", payload, 1)
    samples = np.frombuffer(payload, dtype="<f4", offset=5)
    if len(samples) != count:
        raise ValueError(f"audio frame count {count} does not match payload ({len(samples)})")
    return samples


class LiveSession:
    """One client's pipeline plus protocol bookkeeping."""

    def __init__(self, signals: dict[str, SignalBuffer]):
        self._signals = signals
        self.pipeline: RenderPipeline | None = None
        self.expected_seq = 0

    def configure(self, msg: SessionConfigMsg) -> ReadyMsg:
        if msg.engine_rate <= 0 or msg.engine_rate % UPDATE_RATE_HZ != 0:
            raise ValueError(f"engine_rate {msg.engine_rate} is not a positive multiple of {UPDATE_RATE_HZ}")
        if msg.preset is not None and msg.samples_per_mm is not None:
            raise ValueError("give either preset or samples_per_mm, not both")
        if msg.preset is not None:
            if msg.preset not in PRESETS:
                raise ValueError(f"unknown preset {msg.preset}")
            spm = PRESETS[msg.preset].samples_per_mm
        elif msg.samples_per_mm is not None:
            spm = msg.samples_per_mm
        else:
            raise ValueError("config needs a preset or samples_per_mm")
        buffer = self._signals.get(msg.signal)
        if buffer is None:
            raise ValueError(f"unknown signal {msg.signal!r}")
        mapping = SpatialMapping(spm)
        self.pipeline = RenderPipeline(
            buffer,
            mapping,
            engine_rate=msg.engine_rate,
            friction_enabled=msg.friction_enabled,
        )
        self.expected_seq = 0
        return ReadyMsg(
            engine_rate=msg.engine_rate,
            samples_per_update=self.pipeline.samples_per_update,
            samples_per_mm=spm,
            fragment_width_mm=mapping.fragment_width_mm(buffer),
            friction_enabled=msg.friction_enabled,
            signal_length=buffer.length,
        )

    def move(self, msg: MoveMsg) -> tuple[FrameMsg, bytes]:
        if self.pipeline is None:
            raise ValueError("session not configured")
        if msg.seq != self.expected_seq:
            raise SeqFault(f"out-of-order seq {msg.seq}, expected {self.expected_seq}")
        self.expected_seq += 1
        result = self.pipeline.step(DisplacementUpdate(msg.dx_counts, msg.dy_counts))
        frame = FrameMsg(
            seq=msg.seq,
            t_s=result.t_s,
            position_mm=result.position_mm,
            speed_mm_s=result.speed_mm_s,
            friction_N=float(result.friction[-1]),
        )
        return frame, encode_audio_frame(result.audio)


class SeqFault(Exception):
    pass


def create_app() -> FastAPI:
    app = FastAPI(title="fricative", version=__version__)
    signals: dict[str, SignalBuffer] = {"pilot": pilot_signal()}
    app.state.signals = signals

    @app.get("/presets", response_model=list[PresetInfo])
    def get_presets():
        rows = [table1_row(pid) for pid in sorted(PRESETS)]
        return [
            PresetInfo(
                id=row.preset_id,
                samples_per_mm=row.samples_per_mm,
                cycle_width_mm=row.cycle_width_mm,
                fragment_width_mm=row.fragment_width_mm,
            )
            for row in rows
        ]

    @app.post("/signal", response_model=SignalUploadResponse)
    async def upload_signal(request: Request):
        payload = await request.body()
        if not payload:
            raise HTTPException(status_code=400, detail="empty signal upload")
        try:
            buffer = signal_from_bytes(payload)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        signal_id = hashlib.sha256(payload).hexdigest()[:16]
        signals[signal_id] = buffer
        return SignalUploadResponse(signal_id=signal_id, length=buffer.length)

    @app.websocket("/session")
    async def session_endpoint(ws: WebSocket):
        await ws.accept()
        session = LiveSession(signals)
        try:
            while True:
                text = await ws.receive_text()
                try:
                    raw = json.loads(text)
                except json.JSONDecodeError as exc:
                    await ws.send_text(ErrorMsg(reason="protocol", detail=f"bad JSON: {exc}").model_dump_json())
                    continue
                msg_type = raw.get("type") if isinstance(raw, dict) else None
                try:
                    if msg_type == "config":
                        ready = session.configure(SessionConfigMsg.model_validate(raw))
                        await ws.send_text(ready.model_dump_json())
                    elif msg_type == "move":
                        frame, audio = session.move(MoveMsg.model_validate(raw))
                        await ws.send_text(frame.model_dump_json())
                        await ws.send_bytes(audio)
                    else:
                        await ws.send_text(
                            ErrorMsg(reason="protocol", detail=f"unknown message type {msg_type!r}").model_dump_json()
                        )
                except (ValidationError, ValueError) as exc:
                    await ws.send_text(ErrorMsg(reason="protocol", detail=str(exc)).model_dump_json())
                except SeqFault as exc:
                    await ws.send_text(ErrorMsg(reason="seq-fault", detail=str(exc), fatal=True).model_dump_json())
                    await ws.close(code=1008)
                    return
        except WebSocketDisconnect:
            return

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the explorer UI if its build output exists next to the repo."""
    from fastapi.staticfiles import StaticFiles

    candidates = [
        os.environ.get("FRICATIVE_FRONTEND", ""),
        os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist"),
    ]
    for root in candidates:
        if root and os.path.isdir(root):
            app.mount("/app", StaticFiles(directory=root, html=True), name="explorer")
            return


app = create_app()


def serve(host: str | None = None, port: int | None = None) -> None:
    import uvicorn

    host = host or os.environ.get("FRICATIVE_HOST", "127.0.0.1")
    port = port if port is not None else int(os.environ.get("FRICATIVE_PORT", "8765"))
    uvicorn.run(app, host=host, port=port, log_level="info")
