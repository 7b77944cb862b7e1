"""WebSocket gateway: one operator drives a session, observers watch frames.

Connections must open with a hello carrying the protocol version; mismatches
are refused. The first client to complete the handshake while the operator
slot is free becomes the operator; everyone else observes. Operator hand
samples land in a single-slot mailbox (flooding coalesces latest-wins per
tick) and events queue in arrival order; the tick task applies staged events,
ticks the session on the newest sample, and broadcasts the frame. Slow
observers drop frames rather than stalling the loop. An operator disconnect
freezes the mapping.
"""

from __future__ import annotations

import asyncio
import threading

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from . import protocol
from .mapping import HandSample, MappingStateError
from .kinematics import Pose
from .session import Session, SessionConfig, SessionEvent, frame_record


class GatewayServer:
    def __init__(self, config: SessionConfig | None = None, host: str = "127.0.0.1",
                 port: int = 0, pace: bool = True):
        self.config = config if config is not None else SessionConfig()
        self.host = host
        self.port = port
        self.pace = pace
        self.session = Session(self.config)
        self._operator = None
        self._clients: dict = {}  # websocket -> outbound queue
        self._hand_slot: dict | None = None
        self._events: list = []
        self._input_ready: asyncio.Event | None = None
        self._server = None
        self._loop: asyncio.AbstractEventLoop | None = None
        self._thread: threading.Thread | None = None
        self._stopped: asyncio.Event | None = None

    # -- connection handling -------------------------------------------------

    async def _send(self, ws, message: dict) -> None:
        try:
            await ws.send(protocol.encode(message))
        except ConnectionClosed:
            pass

    async def _handshake(self, ws) -> str | None:
        try:
            raw = await asyncio.wait_for(ws.recv(), timeout=10.0)
            msg = protocol.decode(raw)
        except protocol.ProtocolError as e:
            await self._send(ws, protocol.error_message(str(e), code="bad_hello"))
            return None
        except (asyncio.TimeoutError, ConnectionClosed):
            return None
        if msg["kind"] != "hello":
            await self._send(ws, protocol.error_message(
                "first message must be hello", code="bad_hello"))
            return None
        if msg["version"] != protocol.PROTOCOL_VERSION:
            await self._send(ws, protocol.error_message(
                f"unsupported protocol version {msg['version']}", code="version_mismatch"))
            return None
        role = "observer" if self._operator is not None else "operator"
        await self._send(ws, protocol.hello_ack(
            role=role,
            chain_dict=self.config.chain.to_dict(),
            limits_dict=self.config.limits.to_dict(),
            frame_rate=self.config.frame_rate,
        ))
        return role

    async def _handler(self, ws) -> None:
        role = await self._handshake(ws)
        if role is None:
            await ws.close()
            return
        queue: asyncio.Queue = asyncio.Queue(maxsize=1)
        self._clients[ws] = queue
        sender = asyncio.create_task(self._sender(ws, queue))
        if role == "operator":
            self._operator = ws
        try:
            async for raw in ws:
                await self._on_message(ws, role, raw)
        except ConnectionClosed:
            pass
        finally:
            sender.cancel()
            self._clients.pop(ws, None)
            if ws is self._operator:
                self._operator = None
                self._freeze_on_disconnect()

    async def _sender(self, ws, queue: asyncio.Queue) -> None:
        try:
            while True:
                text = await queue.get()
                await ws.send(text)
        except (ConnectionClosed, asyncio.CancelledError):
            pass

    def _freeze_on_disconnect(self) -> None:
        if self.session.mapping is not None and not self.session.mapping.frozen:
            self._events.append(SessionEvent("freeze"))
            self._input_ready.set()

    async def _on_message(self, ws, role: str, raw) -> None:
        try:
            msg = protocol.decode(raw)
        except protocol.ProtocolError as e:
            await self._send(ws, protocol.error_message(str(e)))
            return
        if role != "operator":
            await self._send(ws, protocol.error_message(
                "observers cannot send control messages", code="not_operator"))
            return
        if msg["kind"] == "hand":
            self._hand_slot = msg
            self._input_ready.set()
        elif msg["kind"] == "event":
            self._events.append(SessionEvent.from_payload(msg["event"]))
            self._input_ready.set()
        else:
            await self._send(ws, protocol.error_message(
                f"unexpected message kind {msg['kind']!r} after handshake"))

    # -- tick loop -------------------------------------------------------------

    async def _tick_loop(self) -> None:
        tick_period = 1.0 / self.config.frame_rate
        loop = asyncio.get_running_loop()
        last_tick = loop.time() - tick_period
        while True:
            await self._input_ready.wait()
            if self.pace:
                due = last_tick + tick_period
                now = loop.time()
                if now < due:
                    await asyncio.sleep(due - now)
            self._input_ready.clear()

            events, self._events = self._events, []
            for ev in events:
                try:
                    self.session.apply_event(ev)
                except (MappingStateError, ValueError) as e:
                    if self._operator is not None:
                        await self._send(self._operator, protocol.error_message(
                            str(e), code="bad_event"))

            msg_hand, self._hand_slot = self._hand_slot, None
            if msg_hand is None:
                continue  # events only; they apply on the next sample's tick
            last_tick = loop.time()
            try:
                sample = HandSample(
                    pose=Pose(msg_hand["pos"], msg_hand["q"]),
                    aperture=msg_hand["aperture"],
                    timestamp=msg_hand["t"],
                )
                frame = self.session.tick(sample)
            except ValueError as e:
                if self._operator is not None:
                    await self._send(self._operator, protocol.error_message(
                        str(e), code="bad_sample"))
                continue
            self._broadcast_frame(frame)

    def _broadcast_frame(self, frame) -> None:
        message = protocol.frame_message(
            frame_record(frame),
            mapping_summary={
                "frozen": frame.mapping_frozen,
                "scale": frame.mapping_scale,
                "mirror": list(frame.mapping_mirror),
            },
        )
        text = protocol.encode(message)
        for queue in self._clients.values():
            if queue.full():  # slow observer: drop the stale frame
                try:
                    queue.get_nowait()
                except asyncio.QueueEmpty:
                    pass
            queue.put_nowait(text)

    # -- lifecycle ---------------------------------------------------------------

    async def _run(self, started: threading.Event | None = None,
                   announce: bool = False) -> None:
        self._input_ready = asyncio.Event()
        self._stopped = asyncio.Event()
        async with ws_serve(self._handler, self.host, self.port) as server:
            self._server = server
            self.port = next(iter(server.sockets)).getsockname()[1]
            if announce:
                print(f"listening on {self.url}", flush=True)
            ticker = asyncio.create_task(self._tick_loop())
            if started is not None:
                started.set()
            try:
                await self._stopped.wait()
            finally:
                ticker.cancel()

    def run_forever(self, announce: bool = False) -> None:
        """Blocking entry point for the CLI."""
        asyncio.run(self._run(announce=announce))

    @property
    def url(self) -> str:
        return f"ws://{self.host}:{self.port}"

    def start_background(self) -> None:
        """Run the server on a daemon thread (tests, embedding)."""
        started = threading.Event()
        self._loop = asyncio.new_event_loop()

        def runner():
            asyncio.set_event_loop(self._loop)
            self._loop.run_until_complete(self._run(started))

        self._thread = threading.Thread(target=runner, daemon=True)
        self._thread.start()
        if not started.wait(timeout=10.0):
            raise RuntimeError("gateway failed to start")

    def stop(self) -> None:
        if self._loop is not None and self._stopped is not None:
            self._loop.call_soon_threadsafe(self._stopped.set)
            self._thread.join(timeout=10.0)
