// Revision polling: a 1-second heartbeat fetches the session document;
// panels refresh only when the revision actually moved.

import type { Client, SessionDoc } from "./api.js";

export interface Poller {
  stop(): void;
}

export function startPolling(
  client: Client,
  sessionId: string,
  handlers: {
    onSession: (doc: SessionDoc) => void;
    onOffline: (offline: boolean) => void;
  },
  intervalMs = 1000,
): Poller {
  let stopped = false;
  let busy = false;

  const tick = async () => {
    if (stopped || busy) return;
    busy = true;
    try {
      const doc = await client.session(sessionId);
      handlers.onOffline(false);
      handlers.onSession(doc);
    } catch (err) {
      // only connectivity problems flip the offline banner; structured
      // service errors surface through the normal error strip
      if (!(err instanceof Error && "status" in err)) {
        handlers.onOffline(true);
      }
    } finally {
      busy = false;
    }
  };

  const handle = setInterval(tick, intervalMs);
  void tick();
  return {
    stop() {
      stopped = true;
      clearInterval(handle);
    },
  };
}
