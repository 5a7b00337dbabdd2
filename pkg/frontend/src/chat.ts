// Chat panel state: one session, at most one request in flight,
// assistant messages annotated with the trace badge and an optional
// show-path action derived from the trace.

import { ApiClient, HttpError } from "./api.js";
import { assistantBadge, findPathHighlight } from "./trace.js";
import type { AssistantBadge, PathHighlight } from "./trace.js";

export interface ChatMessage {
  role: "user" | "assistant";
  text: string;
  badge?: AssistantBadge;
  pathHighlight?: PathHighlight | null;
}

export type HighlightHandler = (highlight: PathHighlight) => void;

export class ChatController {
  sessionId: string | null = null;
  messages: ChatMessage[] = [];
  pending = false;
  input = "";
  banner: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly onShowPath?: HighlightHandler
  ) {}

  async start(): Promise<void> {
    this.sessionId = await this.api.createSession();
  }

  /** Send the given text; returns the assistant message on success. */
  async send(text: string): Promise<ChatMessage | null> {
    if (this.pending) {
      this.banner = "a request is already in flight";
      return null;
    }
    if (!this.sessionId) {
      throw new Error("session not started");
    }
    this.pending = true;
    this.banner = null;
    this.input = text;
    try {
      const response = await this.api.sendMessage(this.sessionId, text);
      const message: ChatMessage = {
        role: "assistant",
        text: response.answer,
        badge: assistantBadge(response.trace),
        pathHighlight: findPathHighlight(response.trace),
      };
      this.messages.push({ role: "user", text });
      this.messages.push(message);
      this.input = "";
      return message;
    } catch (error) {
      if (error instanceof HttpError && error.status === 409) {
        this.banner = "session is busy; wait for the running turn";
      } else if (error instanceof HttpError && error.status === 503) {
        this.banner = "backend unavailable; try again shortly";
      } else {
        this.banner = "request failed";
      }
      return null; // input retained for retry
    } finally {
      this.pending = false;
    }
  }

  /** Wire the "show path" control of an assistant message. */
  showPath(message: ChatMessage): void {
    if (message.pathHighlight && this.onShowPath) {
      this.onShowPath(message.pathHighlight);
    }
  }
}
