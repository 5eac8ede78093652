from .report import ReportTemplates, render_report

__all__ = ['ReportTemplates', 'render_report']
