import { ProbeApp } from './app.js';
import { readConfig } from './config.js';
import { showError } from './ui.js';

function boot(): void {
  const root = document.getElementById('app');
  if (!root) {
    return;
  }
  const app = new ProbeApp({
    root,
    config: readConfig(document),
    storage: window.sessionStorage,
  });
  void app.start().catch((err) => {
    showError(root, `could not reach the server: ${(err as Error).message}`);
  });
}

if (document.readyState === 'loading') {
  document.addEventListener('DOMContentLoaded', boot);
} else {
  boot();
}
