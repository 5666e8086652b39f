/**
 * Session client: lockstep move/frame exchange over a WebSocket-like
 * transport. Works with the browser WebSocket and with the `ws`
 * package under node (for headless recording), so the recorder and the
 * UI exercise the same protocol code.
 */

import {
  ConfigMsg,
  ErrorMsg,
  FrameMsg,
  ReadyMsg,
  decodeAudioFrame,
  parseServerMsg,
} from "./protocol.js";

/** The subset of WebSocket both the browser and `ws` provide. */
export interface SocketLike {
  binaryType: string;
  send(data: string): void;
  close(): void;
  addEventListener(type: "message", handler: (event: { data: unknown }) => void): void;
  addEventListener(type: "close" | "error", handler: () => void): void;
}

export interface MoveReply {
  frame: FrameMsg;
  audio: Float32Array;
}

export class SessionClient {
  private readonly socket: SocketLike;
  private readonly textQueue: string[] = [];
  private readonly binaryQueue: ArrayBuffer[] = [];
  private waiters: (() => void)[] = [];
  private closed = false;
  private seq = 0;

  constructor(socket: SocketLike) {
    this.socket = socket;
    socket.binaryType = "arraybuffer";
    socket.addEventListener("message", (event) => {
      const data = event.data;
      if (typeof data === "string") {
        this.textQueue.push(data);
      } else if (data instanceof ArrayBuffer) {
        this.binaryQueue.push(data);
      } else if (ArrayBuffer.isView(data as ArrayBufferView)) {
        const view = data as ArrayBufferView;
        this.binaryQueue.push(
          view.buffer.slice(view.byteOffset, view.byteOffset + view.byteLength) as ArrayBuffer,
        );
      }
      this.wake();
    });
    socket.addEventListener("close", () => {
      this.closed = true;
      this.wake();
    });
    socket.addEventListener("error", () => {
      this.closed = true;
      this.wake();
    });
  }

  private wake(): void {
    const waiters = this.waiters;
    this.waiters = [];
    for (const w of waiters) w();
  }

  private async waitFor<T>(poll: () => T | undefined): Promise<T> {
    for (;;) {
      const value = poll();
      if (value !== undefined) return value;
      if (this.closed) throw new Error("session closed");
      await new Promise<void>((resolve) => this.waiters.push(resolve));
    }
  }

  private nextText(): Promise<string> {
    return this.waitFor(() => this.textQueue.shift());
  }

  private nextBinary(): Promise<ArrayBuffer> {
    return this.waitFor(() => this.binaryQueue.shift());
  }

  async configure(config: Omit<ConfigMsg, "type">): Promise<ReadyMsg> {
    this.socket.send(JSON.stringify({ type: "config", ...config }));
    const reply = parseServerMsg(await this.nextText());
    if (reply.type === "error") {
      throw new Error(`config rejected: ${(reply as ErrorMsg).detail}`);
    }
    if (reply.type !== "ready") {
      throw new Error(`expected ready, got ${reply.type}`);
    }
    this.seq = 0;
    return reply;
  }

  /** Send one displacement update and await its frame + audio. */
  async move(dxCounts: number, dyCounts = 0): Promise<MoveReply> {
    const seq = this.seq;
    this.seq += 1;
    this.socket.send(
      JSON.stringify({ type: "move", seq, dx_counts: dxCounts, dy_counts: dyCounts }),
    );
    const msg = parseServerMsg(await this.nextText());
    if (msg.type === "error") {
      throw new Error(`move rejected: ${(msg as ErrorMsg).detail}`);
    }
    if (msg.type !== "frame") {
      throw new Error(`expected frame, got ${msg.type}`);
    }
    const audio = decodeAudioFrame(await this.nextBinary());
    return { frame: msg, audio };
  }

  close(): void {
    this.socket.close();
  }
}
